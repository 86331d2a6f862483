#include "bosecorr/model.hpp"

#include <cmath>
#include <string>

#include "bosecorr/errors.hpp"

namespace bosecorr {

std::string_view to_string(Regime r) noexcept {
    switch (r) {
        case Regime::HighT: return "HighT";
        case Regime::LowT: return "LowT";
        case Regime::Intermediate: return "Intermediate";
    }
    return "Intermediate";
}

void validate(const PhysicalParams& p) {
    auto check = [](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw DomainError(std::string("physical parameter '") + name +
                              "' must be finite and strictly positive");
        }
    };
    check(p.hbar, "hbar");
    check(p.m, "m");
    check(p.g, "g");
    check(p.Omega, "Omega");
    check(p.Lambda, "Lambda");
    check(p.beta, "beta");
}

DerivedScales derive_scales(const PhysicalParams& p) {
    validate(p);
    DerivedScales d;
    d.v = std::sqrt(p.Lambda / p.m);
    d.R_c = std::sqrt(2.0 * p.Lambda / (p.m * p.Omega * p.Omega));
    d.alpha = d.R_c / (p.hbar * d.v);
    d.lambda_T = p.hbar * p.beta * d.v;
    d.regime_ratio = p.beta / d.alpha;
    return d;
}

double rho_tf(double x, const PhysicalParams& p, const DerivedScales& d) {
    const double s = x / d.R_c;
    if (std::abs(s) >= 1.0) return 0.0;
    return (p.Lambda / p.g) * (1.0 - s * s);
}

double energy_level(long n, const DerivedScales& d) {
    if (n < 0) throw DomainError("energy_level: mode index must be >= 0");
    const double nn = static_cast<double>(n);
    return std::sqrt(nn * (nn + 1.0)) / d.alpha;
}

LevelSpacing level_spacing_expansion(long n, const DerivedScales& d) {
    if (n < 1) throw DomainError("level_spacing_expansion: n must be >= 1");
    const double nn = static_cast<double>(n);
    LevelSpacing s;
    // sqrt((n+1)(n+2)) - sqrt(n(n+1)) without cancellation
    const double a = std::sqrt((nn + 1.0) * (nn + 2.0));
    const double b = std::sqrt(nn * (nn + 1.0));
    s.exact = (2.0 * (nn + 1.0)) / (a + b) / d.alpha;
    s.expansion = (1.0 + 1.0 / (8.0 * nn * nn) - 1.0 / (4.0 * nn * nn * nn)) / d.alpha;
    return s;
}

AmplitudeRatio amplitude_ratio_expansion(long n) {
    if (n < 1) throw DomainError("amplitude_ratio_expansion: n must be >= 1");
    const double nn = static_cast<double>(n);
    return {(nn + 0.5) / std::sqrt(nn * (nn + 1.0)),
            1.0 + 1.0 / (8.0 * nn * nn) - 1.0 / (8.0 * nn * nn * nn)};
}

Regime classify_regime(const DerivedScales& d, RegimeThresholds t) {
    if (!(t.r_lo > 0.0) || !(t.r_lo < t.r_hi)) {
        throw ConfigError("classify_regime: require 0 < r_lo < r_hi");
    }
    if (d.regime_ratio < t.r_lo) return Regime::HighT;
    if (d.regime_ratio > t.r_hi) return Regime::LowT;
    return Regime::Intermediate;
}

}  // namespace bosecorr
