#pragma once

#include <cstddef>
#include <vector>

#include "bosecorr/green_trapped.hpp"
#include "bosecorr/model.hpp"

namespace bosecorr {

/// Uniform vertex grid on [-(1-clamp) R_c, (1-clamp) R_c] with N interior nodes
/// (N + 2 nodes in total). Halving h keeps every old node, so grid-doubling
/// comparisons need no interpolation.
struct FdmGrid {
    std::size_t N = 0;
    double clamp = kEdgeClamp;
    double half_width = 0.0;
    double h = 0.0;
    std::vector<double> nodes;

    static FdmGrid make(std::size_t n_interior, const DerivedScales& d, double clamp = kEdgeClamp);
    /// Same domain, 2N + 1 interior nodes.
    FdmGrid refined(const DerivedScales& d) const;
};

enum class SourceSpread {
    SnapToNode,  ///< delta as 1/h at the nearest node
    Linear,      ///< delta split between the two neighbouring nodes
};

struct FdmSolution {
    std::vector<double> x;
    std::vector<double> g;
    std::size_t source_node = 0;
    double snap_offset = 0.0;   ///< snapped node minus requested x'
    double source_x = 0.0;      ///< where the delta actually sits
    bool gauge_fixed = false;   ///< omega = 0: integral of G set to zero
    double error_estimate = 0.0;  ///< max |G_h - G_{h/2}| over shared nodes with |x| <= 0.9 of the half-width

    /// Linear interpolation between nodes; one-sided within the cell holding the source.
    double at(double xq) const;
};

/// Conservative second-order discretization of
///   -(w^2 / hbar^2 v^2) G + (d/dx)((1 - x^2/R_c^2) dG/dx) = (g / hbar^2 v^2) delta(x - x').
/// For w != 0 the flux (1 - x^2/R_c^2) G' vanishes at both ends. At w = 0 that is
/// incompatible with the source, so half of the source flux leaves through
/// each end (the flux carried by the exact zero-mode solution), and the
/// remaining constant is fixed by the gauge integral G = 0.
FdmSolution fdm_spectral_solve(double omega, double xp, const PhysicalParams& p, const DerivedScales& d,
                               const FdmGrid& grid, SourceSpread spread = SourceSpread::SnapToNode,
                               bool estimate_error = true);

struct EigenReport {
    std::vector<double> raw;           ///< lowest eigenvalues on the given grid
    std::vector<double> extrapolated;  ///< Richardson (4 lambda_{h/2} - lambda_h) / 3
    std::vector<double> expected;      ///< n (n+1) / R_c^2
};

/// Lowest n_levels eigenvalues of -(d/dx)((1 - x^2/R_c^2) d/dx) with natural boundaries.
EigenReport fdm_eigensolve(const DerivedScales& d, const FdmGrid& grid, std::size_t n_levels);

struct BruteSum {
    double sum = 0.0;
    double reference = 0.0;
    double difference() const noexcept { return sum - reference; }
};

/// sum_{l=1}^{l_max} cos(2 pi l theta)/l^2 added smallest-first, against pi^2 (theta^2 - theta + 1/6).
BruteSum brute_frequency_sum(double theta, long l_max);

/// Direct low-temperature eigenfunction sum
///   bracket - (g / 2 hbar v) sum_{n=1}^{n_max} (n+1/2)/sqrt(n(n+1)) P_n P_n' e^{-sqrt(n(n+1)) dtau / alpha}
/// with Legendre polynomials by recurrence (no asymptotic forms).
double brute_legendre_series(double x, double xp, double dtau, const PhysicalParams& p,
                             const DerivedScales& d, long n_max);

struct OdeResidual {
    double residual = 0.0;  ///< |L G| by Richardson-extrapolated central differences
    double scale = 0.0;     ///< sum of the magnitudes of the terms of L G
    double norm = 0.0;      ///< |G_w(x, x')|
};

/// Residual of the spectral equation applied to spectral_density at x (x != x').
OdeResidual spectral_ode_residual(double omega, double x, double xp, const PhysicalParams& p,
                                  const DerivedScales& d, double h);

struct JumpCheck {
    double numeric = 0.0;   ///< (1 - x'^2/R_c^2)[G'(x'+) - G'(x'-)] by one-sided differences
    double expected = 0.0;  ///< g / (hbar^2 v^2)
};

JumpCheck spectral_jump(double omega, double xp, const PhysicalParams& p, const DerivedScales& d, double h);

}  // namespace bosecorr
