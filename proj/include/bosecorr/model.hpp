#pragma once

#include <string_view>

namespace bosecorr {

/// Inputs of the trapped 1D Bose gas. k_B = 1, so beta is the inverse
/// temperature in the user's energy units. Lambda is the renormalized
/// chemical potential and is taken as given.
struct PhysicalParams {
    double hbar = 1.0;
    double m = 1.0;
    double g = 1.0;
    double Omega = 1.0;
    double Lambda = 1.0;
    double beta = 1.0;
};

/// Scales derived from PhysicalParams by derive_scales().
struct DerivedScales {
    double v = 0.0;             ///< sound velocity at the trap center, sqrt(Lambda/m)
    double R_c = 0.0;           ///< condensate radius, sqrt(2 Lambda / (m Omega^2))
    double alpha = 0.0;         ///< R_c / (hbar v); inverse level spacing
    double lambda_T = 0.0;      ///< thermal length hbar beta v
    double regime_ratio = 0.0;  ///< beta / alpha
};

enum class Regime { HighT, LowT, Intermediate };

std::string_view to_string(Regime r) noexcept;

struct RegimeThresholds {
    double r_lo = 0.1;
    double r_hi = 10.0;
};

/// Throws DomainError naming the first non-positive field.
void validate(const PhysicalParams& p);

DerivedScales derive_scales(const PhysicalParams& p);

/// Thomas-Fermi density, exactly zero outside |x| <= R_c.
double rho_tf(double x, const PhysicalParams& p, const DerivedScales& d);

/// Excitation energy E_n = sqrt(n(n+1)) / alpha.
double energy_level(long n, const DerivedScales& d);

struct LevelSpacing {
    double exact = 0.0;      ///< E_{n+1} - E_n
    double expansion = 0.0;  ///< (1/alpha)[1 + 1/(8n^2) - 1/(4n^3)]
    double difference() const noexcept { return exact - expansion; }
};

LevelSpacing level_spacing_expansion(long n, const DerivedScales& d);

/// (n + 1/2)/sqrt(n(n+1)) and its truncated large-n expansion.
struct AmplitudeRatio {
    double exact = 0.0;
    double expansion = 0.0;
};

AmplitudeRatio amplitude_ratio_expansion(long n);

Regime classify_regime(const DerivedScales& d, RegimeThresholds t = {});

}  // namespace bosecorr
