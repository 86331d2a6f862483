#include "bosecorr/legendre.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bosecorr/errors.hpp"

namespace bosecorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_open_interval(double u, const char* who) {
    if (!(u > -1.0 && u < 1.0)) {
        throw DomainError(std::string(who) + ": argument must lie in (-1, 1)");
    }
}

// Gauss-Legendre rule on [0, 1], built once from p_poly.
template <int N>
struct GaussRule {
    std::array<double, N> x{};
    std::array<double, N> w{};

    GaussRule() {
        for (int i = 0; i < N; ++i) {
            double t = std::cos(kPi * (i + 0.75) / (N + 0.5));
            for (int it = 0; it < 100; ++it) {
                const double pn = p_poly(N, t);
                const double pn1 = p_poly(N - 1, t);
                const double dp = N * (t * pn - pn1) / (t * t - 1.0);
                const double dt = pn / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            const double pn1 = p_poly(N - 1, t);
            const double dp = N * (t * p_poly(N, t) - pn1) / (t * t - 1.0);
            x[i] = 0.5 * (1.0 - t);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // 2/((1-t^2)P'^2) halved for [0,1]
        }
    }
};

const GaussRule<16>& gauss16() {
    static const GaussRule<16> rule;
    return rule;
}

Scaled sin_scaled(cplx z) {
    const cplx i(0.0, 1.0);
    return (Scaled::exp(i * z) - Scaled::exp(-i * z)) * cplx(0.0, -0.5);
}

Scaled cos_scaled(cplx z) {
    const cplx i(0.0, 1.0);
    return (Scaled::exp(i * z) + Scaled::exp(-i * z)) * cplx(0.5, 0.0);
}

bool is_negative_integer(cplx nu) {
    if (nu.imag() != 0.0 || nu.real() >= 0.0) return false;
    return std::abs(nu.real() - std::round(nu.real())) <= 1e-12 * std::max(1.0, std::abs(nu.real()));
}

}  // namespace

// ---------------------------------------------------------------------------

double p_poly(long n, double u) {
    if (n < 0) throw DomainError("p_poly: degree must be >= 0");
    if (!(std::abs(u) <= 1.0)) throw DomainError("p_poly: |u| must be <= 1");
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = u;
    for (long k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk + 1.0) * u * p1 - kk * p0) / (kk + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double q_poly(long n, double u) {
    if (n < 0) throw DomainError("q_poly: degree must be >= 0");
    require_open_interval(u, "q_poly");
    double q0 = std::atanh(u);
    if (n == 0) return q0;
    double q1 = u * q0 - 1.0;
    for (long k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double q2 = ((2.0 * kk + 1.0) * u * q1 - kk * q0) / (kk + 1.0);
        q0 = q1;
        q1 = q2;
    }
    return q1;
}

double p_poly_asymptotic_amplitude(long n, double theta) {
    if (n < 1) throw DomainError("p_poly_asymptotic: n must be >= 1");
    if (!(theta > 0.0 && theta < kPi)) throw DomainError("p_poly_asymptotic: theta must lie in (0, pi)");
    return std::sqrt(2.0 / (kPi * static_cast<double>(n) * std::sin(theta)));
}

double p_poly_asymptotic(long n, double theta, AsymptoticPhase phase) {
    const double amp = p_poly_asymptotic_amplitude(n, theta);
    const double shift = phase == AsymptoticPhase::HalfShifted ? 0.5 : 0.0;
    return amp * std::cos((static_cast<double>(n) + shift) * theta - 0.25 * kPi);
}

// ---------------------------------------------------------------------------

Degree Degree::integer(long n) {
    if (n < 0) throw DomainError("Degree::integer: n must be >= 0");
    Degree d;
    d.nu = cplx(static_cast<double>(n), 0.0);
    d.origin = Origin::Integer;
    d.n = n;
    return d;
}

Degree Degree::direct(cplx nu) {
    Degree d;
    d.nu = nu;
    d.origin = Origin::Direct;
    return d;
}

std::optional<long> Degree::as_integer() const {
    if (origin == Origin::Integer) return n;
    if (nu.imag() != 0.0) return std::nullopt;
    const double r = std::round(nu.real());
    if (std::abs(nu.real() - r) > 1e-12 * std::max(1.0, std::abs(r))) return std::nullopt;
    const long k = static_cast<long>(r);
    return k >= 0 ? k : -k - 1;  // P_{-nu-1} = P_nu
}

Degree nu_from_omega(double omega, const DerivedScales& d) {
    const double x = d.alpha * omega;
    const double x2 = x * x;
    Degree deg;
    deg.origin = Degree::Origin::FromOmega;
    deg.omega = omega;
    if (x2 <= 0.25) {
        // -1/2 + sqrt(1/4 - x^2) written without cancellation for small x
        const double root = std::sqrt(0.25 - x2);
        deg.nu = cplx(-x2 / (0.5 + root), 0.0);
    } else {
        deg.nu = cplx(-0.5, std::sqrt(x2 - 0.25));
    }
    return deg;
}

// ---------------------------------------------------------------------------

LegendreEval legendre_p_hypergeometric(const Degree& deg, double u, const LegendreControl& ctl) {
    require_open_interval(u, "legendre_p_hypergeometric");
    const cplx nu = deg.nu;
    const double z = 0.5 * (1.0 - u);
    const double nu_abs = std::abs(nu);

    cplx sum(1.0, 0.0);
    cplx term(1.0, 0.0);
    double abs_sum = 1.0;
    double tail = INFINITY;
    for (std::size_t k = 0; k < ctl.max_terms; ++k) {
        const double kk = static_cast<double>(k);
        term *= (kk - nu) * (kk + nu + 1.0) * (z / ((kk + 1.0) * (kk + 1.0)));
        sum += term;
        abs_sum += std::abs(term);
        if (term == cplx(0.0, 0.0)) {
            // terminating series (non-negative integer degree)
            return {Scaled(sum), 4.0 * kEps * abs_sum / std::max(std::abs(sum), kEps), k + 1,
                    LegendreMethod::Hypergeometric};
        }
        const double kn = kk + 1.0;
        const double ratio = std::abs((kn - nu) * (kn + nu + 1.0)) * z / ((kn + 1.0) * (kn + 1.0));
        if (kn > nu_abs + 1.0 && ratio < 1.0) {
            tail = std::abs(term) * ratio / (1.0 - ratio);
            const double round = 4.0 * kEps * abs_sum;
            if (tail <= ctl.tol * std::abs(sum)) {
                const double scale = std::max(std::abs(sum), kEps);
                return {Scaled(sum), (tail + round) / scale, k + 1, LegendreMethod::Hypergeometric};
            }
        }
    }
    const double bound = tail / std::max(std::abs(sum), kEps);
    throw AccuracyError("legendre_p_hypergeometric: series did not converge within max_terms "
                        "(argument too close to -1)",
                        bound);
}

LegendreEval legendre_p_mehler(const Degree& deg, double u, const LegendreControl& ctl) {
    require_open_interval(u, "legendre_p_mehler");
    const double theta = std::acos(u);
    const cplx c = deg.nu + 0.5;
    const double scale = std::abs(c.imag()) * theta;
    const double half = 0.5 * theta;
    const cplx i(0.0, 1.0);

    // phi = theta (1 - s^2) removes the inverse square-root endpoint singularity.
    auto integrand = [&](double s) -> cplx {
        const double s2 = s * s;
        const double phi = theta * (1.0 - s2);
        const cplx w = 0.5 * (std::exp(i * c * phi - scale) + std::exp(-i * c * phi - scale));
        const double y = half * s2;
        const double sinc = y < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
        const double denom = std::sqrt(2.0 * std::sin(theta * (1.0 - 0.5 * s2))) * std::sqrt(half * sinc);
        return (std::numbers::sqrt2 / kPi) * 2.0 * theta * w / denom;
    };

    const auto& rule = gauss16();
    auto composite = [&](std::size_t panels, double& l1) -> cplx {
        cplx acc(0.0, 0.0);
        l1 = 0.0;
        const double width = 1.0 / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = width * static_cast<double>(p);
            cplx panel(0.0, 0.0);
            for (int j = 0; j < 16; ++j) {
                const cplx f = integrand(a + width * rule.x[j]) * (width * rule.w[j]);
                panel += f;
                l1 += std::abs(f);
            }
            acc += panel;
        }
        return acc;
    };

    std::size_t panels = 2 + static_cast<std::size_t>(std::ceil(std::sqrt(std::abs(c.imag()) * theta)) +
                                                      std::ceil(std::abs(c.real()) * theta / 4.0));
    double l1 = 0.0;
    cplx prev = composite(panels, l1);
    double bound = INFINITY;
    double last_diff = INFINITY;
    cplx cur = prev;
    while (2 * panels <= ctl.max_panels) {
        panels *= 2;
        cur = composite(panels, l1);
        const double diff = std::abs(cur - prev);
        const double ref = std::max(std::abs(cur), l1 * 1e-3);
        bound = diff / std::max(ref, std::numeric_limits<double>::min());
        // rounding in the panel sum sets a floor below which doubling cannot help
        if (diff <= std::max(ctl.tol * ref, 32.0 * kEps * l1)) {
            const double rel = std::max(bound, 8.0 * kEps * l1 / std::max(std::abs(cur), kEps));
            return {Scaled(cur, scale), rel, panels * 16, LegendreMethod::MehlerDirichlet};
        }
        // stalled at the rounding floor: further doubling only adds noise
        if (diff >= 0.25 * last_diff && bound <= 1e4 * ctl.tol) {
            return {Scaled(cur, scale), bound, panels * 16, LegendreMethod::MehlerDirichlet};
        }
        last_diff = diff;
        prev = cur;
    }
    if (bound <= 1e4 * ctl.tol) {
        return {Scaled(cur, scale), bound, panels * 16, LegendreMethod::MehlerDirichlet};
    }
    throw AccuracyError("legendre_p_mehler: quadrature did not converge", bound);
}

LegendreEval legendre_p(const Degree& deg, double u, const LegendreControl& ctl) {
    if (auto n = deg.as_integer()) {
        if (!(std::abs(u) <= 1.0)) throw DomainError("legendre_p: |u| must be <= 1");
        return {Scaled(cplx(p_poly(*n, u), 0.0)), 4.0 * kEps * static_cast<double>(*n + 1), 0,
                LegendreMethod::Polynomial};
    }
    require_open_interval(u, "legendre_p");
    const double z = 0.5 * (1.0 - u);
    if (z <= 0.5 && std::abs(deg.nu.imag()) * std::sqrt(z) <= 30.0 && std::abs(deg.nu) < 500.0) {
        try {
            return legendre_p_hypergeometric(deg, u, ctl);
        } catch (const AccuracyError&) {
            // fall through to the integral representation
        }
    }
    return legendre_p_mehler(deg, u, ctl);
}

LegendrePair legendre_pair(const Degree& deg, double u, const LegendreControl& ctl) {
    require_open_interval(u, "legendre_pair");
    if (is_negative_integer(deg.nu)) {
        throw DomainError("legendre_pair: Q_nu is undefined for negative integer degree");
    }
    LegendrePair pair;
    pair.u = u;
    pair.nu = deg;
    if (auto n = deg.as_integer()) {
        pair.p = p_poly(*n, u);
        pair.q = q_poly(*n, u);
        pair.error_bound = 8.0 * kEps * static_cast<double>(*n + 1);
        return pair;
    }
    const LegendreEval pu = legendre_p(deg, u, ctl);
    const LegendreEval pm = legendre_p(deg, -u, ctl);
    const cplx z = deg.nu * kPi;
    const Scaled sinv = sin_scaled(z);
    const Scaled q = (cos_scaled(z) * pu.value - pm.value) * cplx(0.5 * kPi, 0.0) / sinv;

    pair.log_scale = std::abs(deg.nu.imag()) * std::acos(u);
    pair.p = pu.value.value_scaled_by(pair.log_scale);
    pair.q = q.value_scaled_by(pair.log_scale);
    pair.terms = pu.terms + pm.terms;
    // error of q amplified by the cancellation in the connection formula
    const double amp_u = std::exp(cos_scaled(z).log_abs() + pu.value.log_abs() - q.log_abs());
    const double amp_m = std::exp(pm.value.log_abs() - q.log_abs());
    const double gain = 0.5 * kPi * std::exp(-sinv.log_abs());
    pair.error_bound = std::max(pu.error_bound, gain * (amp_u * pu.error_bound + amp_m * pm.error_bound));
    return pair;
}

GreenFactors green_factors(const Degree& deg, double u, const LegendreControl& ctl) {
    require_open_interval(u, "green_factors");
    const cplx i(0.0, 1.0);
    const cplx half_pi_i(0.0, 0.5 * kPi);
    if (auto n = deg.as_integer(); n && !is_negative_integer(deg.nu)) {
        const double p = p_poly(*n, u);
        const double q = q_poly(*n, u);
        return {Scaled(q - half_pi_i * p), Scaled(q + half_pi_i * p), 8.0 * kEps * static_cast<double>(*n + 1)};
    }
    if (is_negative_integer(deg.nu)) {
        throw DomainError("green_factors: Q_nu is undefined for negative integer degree");
    }
    const LegendreEval pu = legendre_p(deg, u, ctl);
    const LegendreEval pm = legendre_p(deg, -u, ctl);
    const cplx z = deg.nu * kPi;
    const Scaled pref = Scaled(cplx(0.5 * kPi, 0.0)) / sin_scaled(z);
    GreenFactors out;
    out.q_minus = pref * (Scaled::exp(-i * z) * pu.value - pm.value);
    out.q_plus = pref * (Scaled::exp(i * z) * pu.value - pm.value);
    out.error_bound = std::max(pu.error_bound, pm.error_bound);
    return out;
}

WronskianResidual wronskian_check(const Degree& deg, double u, double h, const LegendreControl& ctl) {
    if (h <= 0.0) h = 1e-5 * (1.0 - u * u);
    if (!(u - 2.0 * h > -1.0 && u + 2.0 * h < 1.0)) {
        throw DomainError("wronskian_check: u +- 2h must lie in (-1, 1)");
    }
    // fourth-order central differences
    const LegendrePair m2 = legendre_pair(deg, u - 2.0 * h, ctl);
    const LegendrePair m1 = legendre_pair(deg, u - h, ctl);
    const LegendrePair mid = legendre_pair(deg, u, ctl);
    const LegendrePair p1 = legendre_pair(deg, u + h, ctl);
    const LegendrePair p2 = legendre_pair(deg, u + 2.0 * h, ctl);
    const cplx dp = (m2.P() - 8.0 * m1.P() + 8.0 * p1.P() - p2.P()) / (12.0 * h);
    const cplx dq = (m2.Q() - 8.0 * m1.Q() + 8.0 * p1.Q() - p2.Q()) / (12.0 * h);
    WronskianResidual r;
    r.numeric = mid.P() * dq - dp * mid.Q();
    r.analytic = 1.0 / (1.0 - u * u);
    const double scale = std::max(r.analytic, std::abs(mid.P() * dq) + std::abs(dp * mid.Q()));
    r.residual = std::abs(r.numeric - r.analytic) / scale;
    return r;
}

}  // namespace bosecorr
