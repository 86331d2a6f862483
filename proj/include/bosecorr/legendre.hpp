#pragma once

#include <cstddef>
#include <optional>

#include "bosecorr/model.hpp"
#include "bosecorr/scaled.hpp"

namespace bosecorr {

// ---------------------------------------------------------------------------
// Integer degree
// ---------------------------------------------------------------------------

/// Legendre polynomial P_n(u) by the three-term recurrence. |u| <= 1.
double p_poly(long n, double u);

/// Q_n(u) on (-1, 1) by forward recurrence from Q_0 = artanh(u).
double q_poly(long n, double u);

enum class AsymptoticPhase {
    HalfShifted,  ///< cos((n + 1/2) theta - pi/4), the standard form
    Unshifted,    ///< cos(n theta - pi/4), the "keep n" variant
};

/// Large-n form sqrt(2/(pi n sin theta)) cos(phase - pi/4) of P_n(cos theta).
double p_poly_asymptotic(long n, double theta,
                         AsymptoticPhase phase = AsymptoticPhase::HalfShifted);

/// The envelope sqrt(2/(pi n sin theta)).
double p_poly_asymptotic_amplitude(long n, double theta);

// ---------------------------------------------------------------------------
// General (complex) degree
// ---------------------------------------------------------------------------

/// Degree nu of P_nu, Q_nu. Keeps track of where it came from so that the
/// integer case can be dispatched to closed forms.
struct Degree {
    enum class Origin { Integer, FromOmega, Direct };

    cplx nu{0.0, 0.0};
    Origin origin = Origin::Direct;
    long n = 0;          ///< valid when origin == Integer
    double omega = 0.0;  ///< valid when origin == FromOmega

    static Degree integer(long n);
    static Degree direct(cplx nu);

    /// Non-negative integer degree equivalent to nu (using P_{-nu-1} = P_nu), if any.
    std::optional<long> as_integer() const;
};

/// nu = -1/2 + sqrt(1/4 - alpha^2 omega^2), principal branch.
Degree nu_from_omega(double omega, const DerivedScales& d);

struct LegendreControl {
    double tol = 1e-14;
    std::size_t max_terms = 400000;
    std::size_t max_panels = 1 << 14;
};

enum class LegendreMethod { Polynomial, Hypergeometric, MehlerDirichlet };

/// One evaluation of P_nu(u), stored scaled to survive large Im(nu).
struct LegendreEval {
    Scaled value;
    double error_bound = 0.0;  ///< relative to |value| (or to the L1 size of the sum under cancellation)
    std::size_t terms = 0;     ///< series terms or quadrature nodes used
    LegendreMethod method = LegendreMethod::Polynomial;
};

/// Partial sums of 2F1(-nu, nu+1; 1; (1-u)/2). Throws AccuracyError with the
/// achieved bound when max_terms is exhausted (happens as u -> -1).
LegendreEval legendre_p_hypergeometric(const Degree& nu, double u, const LegendreControl& ctl = {});

/// Mehler-Dirichlet integral, composite Gauss-Legendre with panel doubling.
LegendreEval legendre_p_mehler(const Degree& nu, double u, const LegendreControl& ctl = {});

/// P_nu(u) with automatic method selection.
LegendreEval legendre_p(const Degree& nu, double u, const LegendreControl& ctl = {});

/// P_nu(u) and Q_nu(u) sharing one scale: true values are p * exp(log_scale), q * exp(log_scale).
struct LegendrePair {
    cplx p{0.0, 0.0};
    cplx q{0.0, 0.0};
    double log_scale = 0.0;
    double u = 0.0;
    Degree nu;
    std::size_t terms = 0;
    double error_bound = 0.0;  ///< relative

    cplx P() const { return p * std::exp(log_scale); }
    cplx Q() const { return q * std::exp(log_scale); }
};

LegendrePair legendre_pair(const Degree& nu, double u, const LegendreControl& ctl = {});

/// Q_nu(u) -+ i pi/2 P_nu(u). Their product, one at each argument, forms the
/// trapped-gas spectral Green function.
struct GreenFactors {
    Scaled q_minus;  ///< Q - i pi/2 P, the factor attached to the larger argument
    Scaled q_plus;   ///< Q + i pi/2 P, attached to the smaller argument
    double error_bound = 0.0;  ///< relative
};

GreenFactors green_factors(const Degree& nu, double u, const LegendreControl& ctl = {});

struct WronskianResidual {
    cplx numeric{0.0, 0.0};  ///< P Q' - P' Q by central differences
    double analytic = 0.0;   ///< 1/(1-u^2)
    /// |numeric - analytic| / max(analytic, |P Q'| + |P' Q|). The denominator
    /// is the size of the products that cancel in the numeric Wronskian.
    double residual = 0.0;
};

/// Fourth-order central differences with step h; h <= 0 selects 1e-5 * (1 - u^2).
WronskianResidual wronskian_check(const Degree& nu, double u, double h = 0.0,
                                  const LegendreControl& ctl = {});

}  // namespace bosecorr
