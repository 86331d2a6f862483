#pragma once

#include <optional>
#include <span>
#include <string>

#include "bosecorr/green.hpp"
#include "bosecorr/model.hpp"

namespace bosecorr {

enum class CorrelatorMethod { Series, Spectral, AsymptoticAuto, ClosedForm };

std::string_view to_string(CorrelatorMethod m) noexcept;

struct CorrelatorQuery {
    double x1 = 0.0;
    double tau1 = 0.0;
    double x2 = 0.0;
    double tau2 = 0.0;
    CorrelatorMethod method = CorrelatorMethod::AsymptoticAuto;

    /// Half-sum of the spatial arguments; always derived, never stored.
    double S() const noexcept { return 0.5 * (x1 + x2); }
    SpacetimePoint first() const noexcept { return {x1, tau1}; }
    SpacetimePoint second() const noexcept { return {x2, tau2}; }
};

struct CorrelatorValue {
    double gamma = 0.0;
    double imag_residual = 0.0;  ///< |Im| of the symmetrized Green value (Green-based routes)
    double window_slack = 0.0;
    std::string form;            ///< which closed form or route produced the value
    std::string notice;
};

/// sqrt(rho_TF(x1) rho_TF(x2)) exp(-(G12 + G21)/2). Throws UsageError when the
/// two values come from different methods, DivergenceError for divergent
/// input, ConsistencyError when |Im (G12 + G21)/2| > tol * max(1, |Re|).
CorrelatorValue gamma_from_green(const CorrelatorQuery& q, const GreenValue& g12, const GreenValue& g21,
                                 const PhysicalParams& p, const DerivedScales& d, double tol = 1e-9);

/// Exact equal-time trapped correlator from the zero mode.
double gamma_d1_exact(double x1, double x2, const PhysicalParams& p, const DerivedScales& d);

/// sqrt(rho rho') exp(-|x1 - x2| / xi(S)); requires |x1 - x2| << R_c and << |S|.
CorrelatorValue gamma_d1_quasihom(double x1, double x2, const PhysicalParams& p, const DerivedScales& d,
                                  const WindowFactors& w = {});

enum class HomogForm {
    HighT,     ///< |sinh(pi (|dx| + i hbar v dtau) / lambda_T)|^(-1/theta)
    LowT,      ///< |sinh(i pi (|dx| + i hbar v dtau) / (2 R_c))|^(-1/theta)
    PowerLaw,  ///< | |dx| + i hbar v dtau |^(-1/theta)
};

/// Homogeneous-gas correlator with density Lambda/g. Throws DivergenceError at coincident points.
double gamma_homog(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d, HomogForm form);

enum class TrappedForm {
    Auto,
    SinhPower,     ///< high T, general quasi-homogeneous
    Exponential,   ///< high T, lambda_T << |dx| << R_c
    PowerLawHighT, ///< high T, |dx| << lambda_T << R_c
    PowerLawLowT,  ///< low T, u_* << 1
};

std::string_view to_string(TrappedForm f) noexcept;

/// sqrt(rho rho') | |dx| + i hbar v dtau |^(-1/theta(S)). The high- and
/// low-temperature power laws are the same expression and both route here.
double trapped_power_law(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d);

/// Regime-dispatched trapped asymptotic correlator. Throws RegimeError naming
/// the violated inequalities when the requested (or any, for Auto) form is
/// outside its window.
CorrelatorValue gamma_trapped_asymptotic(const CorrelatorQuery& q, const PhysicalParams& p,
                                         const DerivedScales& d, TrappedForm form = TrappedForm::Auto,
                                         const WindowFactors& w = {}, const RegimeThresholds& t = {});

/// theta = 2 pi hbar rho / (m v) with rho = Lambda / g.
double theta_hom(const PhysicalParams& p, const DerivedScales& d);
/// theta(S) = 2 pi hbar rho_TF(S) / (m v).
double theta_S(double S, const PhysicalParams& p, const DerivedScales& d);
/// xi(S) = (hbar beta v / pi) theta(S) = 2 hbar^2 beta rho_TF(S) / m.
double xi_S(double S, const PhysicalParams& p, const DerivedScales& d);

/// Phase correlator G(x, x') in d = 1, 2, 3 (quasi-homogeneous, static).
double phase_correlator_multidim(std::span<const double> x1, std::span<const double> x2,
                                 const PhysicalParams& p, const DerivedScales& d, const WindowFactors& w = {});

/// First-order coherence: d = 3 exp(+c/|dx|), d = 2 (lambda_T/|dx|)^c, d = 1 exp(-|dx|/xi(S)).
double coherence_multidim(std::span<const double> x1, std::span<const double> x2,
                          const PhysicalParams& p, const DerivedScales& d, const WindowFactors& w = {});

struct ExponentSample {
    double separation = 0.0;  ///< | |dx| + i hbar v dtau |
    double gamma = 0.0;
    double rho_product = 1.0;  ///< rho(x1) rho(x2); divided out as its square root
};

struct ExponentFit {
    double inv_theta = 0.0;  ///< minus the log-log slope
    double std_error = 0.0;
    double theta = 0.0;
    std::size_t samples = 0;
    double sep_min = 0.0;
    double sep_max = 0.0;
};

/// Least-squares slope of ln(Gamma / sqrt(rho rho')) against ln(separation).
/// Needs at least 8 samples; non-positive entries throw DataError.
ExponentFit extract_exponent(std::span<const ExponentSample> samples);

struct ExponentReport {
    double S = 0.0;
    double theta_hom = 0.0;
    double theta_S = 0.0;
    double xi_S = 0.0;
    std::optional<ExponentFit> fit;
};

ExponentReport exponent_report(double S, const PhysicalParams& p, const DerivedScales& d,
                               std::optional<ExponentFit> fit = std::nullopt);

}  // namespace bosecorr
