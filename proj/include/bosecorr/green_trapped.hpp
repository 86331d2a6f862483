#pragma once

#include <string>
#include <vector>

#include "bosecorr/green.hpp"
#include "bosecorr/legendre.hpp"
#include "bosecorr/model.hpp"

namespace bosecorr {

/// Points closer than clamp * R_c to the trap edge are rejected: Q_nu is
/// logarithmically singular at u = +-1.
inline constexpr double kEdgeClamp = 1e-6;

/// Spectral (Matsubara) component G_w(x, x') of the trapped Green function.
/// value = re_part + i im_part. re_part and im_part can be individually huge
/// for conical degrees (they cancel in value), hence Scaled.
struct SpectralDensity {
    double omega = 0.0;
    Degree nu;
    Scaled re_part;
    Scaled im_part;
    cplx value{0.0, 0.0};
    double x = 0.0;
    double xp = 0.0;
    double error_bound = 0.0;  ///< relative, from the Legendre evaluations
};

SpectralDensity spectral_density(double omega, double x, double xp, const PhysicalParams& p,
                                 const DerivedScales& d, const LegendreControl& ctl = {},
                                 double clamp = kEdgeClamp);

struct AssemblyControl {
    long l_max = 4096;
    /// AccuracyError when the tail estimate exceeds rel_tol * max(|G|, g R_c / (beta hbar^2 v^2)).
    double rel_tol = 1e-4;
    bool strict = true;
    double clamp = kEdgeClamp;
    LegendreControl legendre{};
};

/// (1/beta) sum_{|l| <= l_max} e^{i w_l dtau} G_{w_l}(x, x'), zero mode included.
/// The imaginary part of the zero mode is returned in phase_term and is not
/// part of value: it is the position-dependent imaginary "global phase"
/// contribution, which never enters physical correlators. Terms stop early
/// once they fall below 1e-17 of the running sum.
GreenValue matsubara_assemble(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                              const DerivedScales& d, const AssemblyControl& ctl = {});

/// Exact equal-time zero-mode Green value beta^-1 Re G_0.
double closed_form_zero_mode(double x, double xp, const PhysicalParams& p, const DerivedScales& d);

struct LowTControl {
    long n0 = 20;
    double min_dtau = 1e-3;  ///< minimum |tau - tau'| / beta
    AsymptoticPhase phase = AsymptoticPhase::HalfShifted;
    RegimeThresholds thresholds{};
    bool enforce_gate = true;  ///< n0 >= 5 and n0 u_* < 1
    bool report_drift = true;  ///< also evaluate at 2 n0 and store the drift
    double clamp = kEdgeClamp;
};

/// u_* = | |x - x'| + i hbar v (tau - tau') | / R_c
double u_star(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p, const DerivedScales& d);

/// The inequalities behind the crossover index; empty when satisfied.
std::vector<std::string> lowT_gate_violations(long n0, double ustar);

/// Low-temperature Legendre series: Bernoulli bracket, exact minus asymptotic
/// terms up to n0, and the asymptotic remainder summed in closed form.
GreenValue lowT_legendre_series(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                const DerivedScales& d, const LowTControl& ctl = {});

/// Quasi-homogeneous window check. Returns the slack max(ratio / factor);
/// throws RegimeError naming every violated inequality.
double check_quasihom_window(double x, double xp, const DerivedScales& d, const WindowFactors& w,
                             bool require_s_small, const char* who);

/// Large-|w| spectral density: -(Lambda / (2 hbar v rho_TF(S))) e^{-|w||dx|/hbar v} / |w|.
double asympt_spectral_highT(double omega, double x, double xp, const PhysicalParams& p,
                             const DerivedScales& d, const WindowFactors& w = {});

/// (Lambda / (2 pi hbar v rho_TF(S))) ln|2 sinh(pi (|dx| + i hbar v dtau) / lambda_T)|, up to a constant.
GreenValue asympt_green_highT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                              const DerivedScales& d, const WindowFactors& w = {},
                              const RegimeThresholds& t = {});

/// -(Lambda / (2 pi hbar v rho_TF(S))) ln(R_c / | |dx| + i hbar v dtau |), up to a constant.
GreenValue asympt_green_lowT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                             const DerivedScales& d, const LowTControl& ctl = {},
                             const WindowFactors& w = {});

}  // namespace bosecorr
