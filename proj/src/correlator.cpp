#include "bosecorr/correlator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "bosecorr/errors.hpp"
#include "bosecorr/green_homogeneous.hpp"
#include "bosecorr/green_trapped.hpp"

namespace bosecorr {

namespace {

constexpr double pi = std::numbers::pi;

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
        if (!s.empty()) s += "; ";
        s += e;
    }
    return s;
}

double rho_interior(double x, const PhysicalParams& p, const DerivedScales& d, const char* who) {
    const double r = rho_tf(x, p, d);
    if (!(r > 0.0)) throw DomainError(std::string(who) + ": point outside the condensate (rho_TF = 0)");
    return r;
}

// | |dx| + i hbar v dtau |
double separation(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d) {
    return std::abs(cplx(std::abs(q.x1 - q.x2), p.hbar * d.v * (q.tau1 - q.tau2)));
}

struct Check {
    double factor;
    std::vector<std::string> failed;
    double slack = 0.0;
    // lhs << rhs
    void much_less(double lhs, double rhs, const std::string& text) {
        const double ratio = (rhs > 0.0) ? lhs / (factor * rhs) : (lhs > 0.0 ? INFINITY : 0.0);
        slack = std::max(slack, ratio);
        if (ratio > 1.0) {
            std::ostringstream os;
            os << text << " (ratio " << (rhs > 0.0 ? lhs / rhs : INFINITY) << ", needs <= " << factor << ")";
            failed.push_back(os.str());
        }
    }
    bool ok() const { return failed.empty(); }
};

Check quasihom(const CorrelatorQuery& q, const DerivedScales& d, const WindowFactors& w) {
    Check c{w.much_less, {}};
    const double dx = std::abs(q.x1 - q.x2);
    c.much_less(dx, std::abs(q.S()), "|x1 - x2| << |S|");
    c.much_less(dx, d.R_c, "|x1 - x2| << R_c");
    return c;
}

Check window_exponential(const CorrelatorQuery& q, const DerivedScales& d, const WindowFactors& w) {
    Check c{w.much_less, {}};
    const double dx = std::abs(q.x1 - q.x2);
    c.much_less(d.lambda_T, dx, "1 << |x1 - x2| / lambda_T");
    c.much_less(dx, d.R_c, "|x1 - x2| / lambda_T << R_c / lambda_T");
    return c;
}

Check window_power_highT(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d,
                         const WindowFactors& w) {
    Check c{w.much_less, {}};
    const double dx = std::abs(q.x1 - q.x2);
    c.much_less(dx, d.lambda_T, "|x1 - x2| / lambda_T << 1");
    c.much_less(std::abs(q.tau1 - q.tau2), p.beta, "|tau1 - tau2| / beta << 1");
    c.much_less(d.lambda_T, d.R_c, "1 << R_c / lambda_T");
    return c;
}

Check window_power_lowT(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d,
                        const WindowFactors& w) {
    Check c{w.much_less, {}};
    c.much_less(separation(q, p, d), d.R_c, "u_* << 1");
    return c;
}

// sqrt(rho_prod) |sinh z|^(-inv_theta)
double sinh_power(double inv_theta, cplx z, double rho_prod) {
    const double l = log_abs_2sinh(z) - std::log(2.0);
    if (!std::isfinite(l)) throw DivergenceError("correlator: coincident points");
    return std::sqrt(rho_prod) * std::exp(-inv_theta * l);
}

}  // namespace

std::string_view to_string(CorrelatorMethod m) noexcept {
    switch (m) {
        case CorrelatorMethod::Series: return "series";
        case CorrelatorMethod::Spectral: return "spectral";
        case CorrelatorMethod::AsymptoticAuto: return "asymptotic-auto";
        case CorrelatorMethod::ClosedForm: return "closed-form";
    }
    return "unknown";
}

std::string_view to_string(TrappedForm f) noexcept {
    switch (f) {
        case TrappedForm::Auto: return "auto";
        case TrappedForm::SinhPower: return "sinh_power";
        case TrappedForm::Exponential: return "exponential";
        case TrappedForm::PowerLawHighT: return "power_law_highT";
        case TrappedForm::PowerLawLowT: return "power_law_lowT";
    }
    return "unknown";
}

CorrelatorValue gamma_from_green(const CorrelatorQuery& q, const GreenValue& g12, const GreenValue& g21,
                                 const PhysicalParams& p, const DerivedScales& d, double tol) {
    if (g12.method != g21.method) throw UsageError("gamma_from_green: Green values from different methods");
    if (g12.divergent || g21.divergent) throw DivergenceError("gamma_from_green: divergent Green value");
    const cplx sym = 0.5 * (g12.value + g21.value);
    CorrelatorValue c;
    c.imag_residual = std::abs(sym.imag());
    if (c.imag_residual > tol * std::max(1.0, std::abs(sym.real()))) {
        std::ostringstream os;
        os << "gamma_from_green: symmetrized Green value has imaginary residual " << c.imag_residual;
        throw ConsistencyError(os.str());
    }
    const double r1 = rho_tf(q.x1, p, d);
    const double r2 = rho_tf(q.x2, p, d);
    c.gamma = std::sqrt(r1 * r2) * std::exp(-sym.real());
    c.form = std::string("green:") + std::string(to_string(g12.method));
    c.window_slack = std::max(g12.window_slack, g21.window_slack);
    return c;
}

double gamma_d1_exact(double x1, double x2, const PhysicalParams& p, const DerivedScales& d) {
    const double r = d.R_c;
    const double a = std::abs(x1 - x2) / r;
    const double den = 1.0 - a - x1 * x2 / (r * r);
    if (!(den > 0.0)) throw DomainError("gamma_d1_exact: bracket not positive (points too close to the edge)");
    const double hv2 = p.hbar * p.hbar * d.v * d.v;
    const double expo = -p.g * r / (4.0 * p.beta * hv2);
    const double r1 = rho_interior(x1, p, d, "gamma_d1_exact");
    const double r2 = rho_interior(x2, p, d, "gamma_d1_exact");
    // bracket = 1 + 2a / den
    return std::sqrt(r1 * r2) * std::exp(expo * std::log1p(2.0 * a / den));
}

CorrelatorValue gamma_d1_quasihom(double x1, double x2, const PhysicalParams& p, const DerivedScales& d,
                                  const WindowFactors& w) {
    CorrelatorQuery q{x1, 0.0, x2, 0.0, CorrelatorMethod::ClosedForm};
    Check c = quasihom(q, d, w);
    if (!c.ok()) throw RegimeError("gamma_d1_quasihom: outside window: " + join(c.failed));
    const double r1 = rho_interior(x1, p, d, "gamma_d1_quasihom");
    const double r2 = rho_interior(x2, p, d, "gamma_d1_quasihom");
    CorrelatorValue v;
    v.gamma = std::sqrt(r1 * r2) * std::exp(-std::abs(x1 - x2) / xi_S(q.S(), p, d));
    v.window_slack = c.slack;
    v.form = "quasihom_exponential";
    return v;
}

double gamma_homog(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d, HomogForm form) {
    const double rho = p.Lambda / p.g;
    const double inv = 1.0 / theta_hom(p, d);
    const double hv = p.hbar * d.v;
    const cplx arg(std::abs(q.x1 - q.x2), hv * (q.tau1 - q.tau2));
    switch (form) {
        case HomogForm::HighT: return sinh_power(inv, (pi / d.lambda_T) * arg, rho * rho);
        case HomogForm::LowT: return sinh_power(inv, cplx(0.0, pi / (2.0 * d.R_c)) * arg, rho * rho);
        case HomogForm::PowerLaw: {
            const double s = std::abs(arg);
            if (s == 0.0) throw DivergenceError("gamma_homog: coincident points");
            return rho * std::exp(-inv * std::log(s));
        }
    }
    throw UsageError("gamma_homog: unknown form");
}

double trapped_power_law(const CorrelatorQuery& q, const PhysicalParams& p, const DerivedScales& d) {
    const double s = separation(q, p, d);
    if (s == 0.0) throw DivergenceError("trapped_power_law: coincident points");
    const double r1 = rho_interior(q.x1, p, d, "trapped_power_law");
    const double r2 = rho_interior(q.x2, p, d, "trapped_power_law");
    return std::sqrt(r1 * r2) * std::exp(-std::log(s) / theta_S(q.S(), p, d));
}

CorrelatorValue gamma_trapped_asymptotic(const CorrelatorQuery& q, const PhysicalParams& p,
                                         const DerivedScales& d, TrappedForm form, const WindowFactors& w,
                                         const RegimeThresholds& t) {
    const Regime regime = classify_regime(d, t);
    auto need_regime = [&](Regime r, const char* what) {
        if (regime != r) {
            throw RegimeError(std::string("gamma_trapped_asymptotic: ") + what + " requires regime " +
                              std::string(to_string(r)) + ", have " + std::string(to_string(regime)));
        }
    };
    auto fail = [](const char* what, const Check& c) {
        throw RegimeError(std::string("gamma_trapped_asymptotic: ") + what + " window violated: " + join(c.failed));
    };

    if (form == TrappedForm::Auto) {
        if (regime == Regime::Intermediate) {
            throw RegimeError(
                "gamma_trapped_asymptotic: no asymptotic window: r_lo <= beta/alpha <= r_hi (neither high nor low temperature)");
        }
        if (regime == Regime::LowT) {
            form = TrappedForm::PowerLawLowT;
        } else {
            const Check qh = quasihom(q, d, w);
            if (!qh.ok()) fail("quasi-homogeneous", qh);
            if (window_exponential(q, d, w).ok()) {
                form = TrappedForm::Exponential;
            } else if (window_power_highT(q, p, d, w).ok()) {
                form = TrappedForm::PowerLawHighT;
            } else {
                form = TrappedForm::SinhPower;
            }
        }
    }

    CorrelatorValue v;
    v.form = std::string(to_string(form));
    const double r1 = rho_interior(q.x1, p, d, "gamma_trapped_asymptotic");
    const double r2 = rho_interior(q.x2, p, d, "gamma_trapped_asymptotic");
    switch (form) {
        case TrappedForm::SinhPower: {
            need_regime(Regime::HighT, "sinh-power form");
            const Check c = quasihom(q, d, w);
            if (!c.ok()) fail("quasi-homogeneous", c);
            v.window_slack = c.slack;
            const cplx z = (pi / d.lambda_T) * cplx(std::abs(q.x1 - q.x2), p.hbar * d.v * (q.tau1 - q.tau2));
            v.gamma = sinh_power(1.0 / theta_S(q.S(), p, d), z, r1 * r2);
            break;
        }
        case TrappedForm::Exponential: {
            need_regime(Regime::HighT, "exponential form");
            Check c = quasihom(q, d, w);
            const Check e = window_exponential(q, d, w);
            c.failed.insert(c.failed.end(), e.failed.begin(), e.failed.end());
            c.slack = std::max(c.slack, e.slack);
            if (!c.ok()) fail("exponential", c);
            v.window_slack = c.slack;
            v.gamma = std::sqrt(r1 * r2) * std::exp(-separation(q, p, d) / xi_S(q.S(), p, d));
            break;
        }
        case TrappedForm::PowerLawHighT: {
            need_regime(Regime::HighT, "high-temperature power law");
            Check c = quasihom(q, d, w);
            const Check e = window_power_highT(q, p, d, w);
            c.failed.insert(c.failed.end(), e.failed.begin(), e.failed.end());
            c.slack = std::max(c.slack, e.slack);
            if (!c.ok()) fail("high-temperature power-law", c);
            v.window_slack = c.slack;
            v.gamma = trapped_power_law(q, p, d);
            break;
        }
        case TrappedForm::PowerLawLowT: {
            need_regime(Regime::LowT, "low-temperature power law");
            const Check c = window_power_lowT(q, p, d, w);
            if (!c.ok()) fail("low-temperature power-law", c);
            v.window_slack = c.slack;
            v.gamma = trapped_power_law(q, p, d);
            break;
        }
        case TrappedForm::Auto: break;
    }
    return v;
}

double theta_hom(const PhysicalParams& p, const DerivedScales& d) {
    return 2.0 * pi * p.hbar * (p.Lambda / p.g) / (p.m * d.v);
}

double theta_S(double S, const PhysicalParams& p, const DerivedScales& d) {
    const double rho = rho_tf(S, p, d);
    if (!(rho > 0.0)) throw DomainError("theta_S: |S| must be < R_c");
    return 2.0 * pi * p.hbar * rho / (p.m * d.v);
}

double xi_S(double S, const PhysicalParams& p, const DerivedScales& d) {
    return p.hbar * p.beta * d.v / pi * theta_S(S, p, d);
}

namespace {

struct VecGeom {
    std::size_t dim;
    double dist;
    double s;
};

VecGeom geometry(std::span<const double> x1, std::span<const double> x2, const DerivedScales& d,
                 const WindowFactors& w, const char* who) {
    if (x1.size() != x2.size() || x1.empty() || x1.size() > 3) {
        throw DomainError(std::string(who) + ": both points need the same dimension 1, 2 or 3");
    }
    double dd = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        dd += (x1[i] - x2[i]) * (x1[i] - x2[i]);
        const double s = 0.5 * (x1[i] + x2[i]);
        ss += s * s;
    }
    VecGeom g{x1.size(), std::sqrt(dd), std::sqrt(ss)};
    if (g.dist == 0.0) throw DivergenceError(std::string(who) + ": coincident points");
    Check c{w.much_less, {}};
    c.much_less(g.dist, g.s, "|x1 - x2| << |S|");
    c.much_less(g.dist, d.R_c, "|x1 - x2| << R_c");
    if (!c.ok()) throw RegimeError(std::string(who) + ": outside quasi-homogeneous window: " + join(c.failed));
    return g;
}

}  // namespace

double phase_correlator_multidim(std::span<const double> x1, std::span<const double> x2,
                                 const PhysicalParams& p, const DerivedScales& d, const WindowFactors& w) {
    const VecGeom g = geometry(x1, x2, d, w, "phase_correlator_multidim");
    const double rho = rho_interior(g.s, p, d, "phase_correlator_multidim");
    const double base = p.Lambda / (p.beta * p.hbar * p.hbar * d.v * d.v * rho);
    switch (g.dim) {
        case 3: return -base / (4.0 * pi * g.dist);
        case 2: return base / (2.0 * pi) * std::log(g.dist / d.lambda_T);
        default: return 0.5 * base * g.dist;
    }
}

double coherence_multidim(std::span<const double> x1, std::span<const double> x2,
                          const PhysicalParams& p, const DerivedScales& d, const WindowFactors& w) {
    const VecGeom g = geometry(x1, x2, d, w, "coherence_multidim");
    const double rho = rho_interior(g.s, p, d, "coherence_multidim");
    const double base = p.Lambda / (p.beta * p.hbar * p.hbar * d.v * d.v * rho);
    switch (g.dim) {
        case 3: return std::exp(base / (4.0 * pi * g.dist));
        case 2: return std::pow(d.lambda_T / g.dist, base / (2.0 * pi));
        default: return std::exp(-0.5 * base * g.dist);
    }
}

ExponentFit extract_exponent(std::span<const ExponentSample> samples) {
    if (samples.size() < 8) throw DataError("extract_exponent: need at least 8 samples");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx, ly;
    ExponentFit f;
    f.sep_min = INFINITY;
    f.sep_max = 0.0;
    for (const auto& s : samples) {
        if (!(s.separation > 0.0) || !(s.gamma > 0.0) || !(s.rho_product > 0.0) ||
            !std::isfinite(s.gamma) || !std::isfinite(s.separation)) {
            throw DataError("extract_exponent: separations, correlator values and densities must be positive");
        }
        lx.push_back(std::log(s.separation));
        ly.push_back(std::log(s.gamma) - 0.5 * std::log(s.rho_product));
        sx += lx.back();
        sy += ly.back();
        f.sep_min = std::min(f.sep_min, s.separation);
        f.sep_max = std::max(f.sep_max, s.separation);
    }
    const double n = static_cast<double>(lx.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DataError("extract_exponent: separations must not all be equal");
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        ssr += r * r;
    }
    f.inv_theta = -slope;
    f.std_error = std::sqrt(ssr / (n - 2.0) / sxx);
    f.theta = 1.0 / f.inv_theta;
    f.samples = lx.size();
    return f;
}

ExponentReport exponent_report(double S, const PhysicalParams& p, const DerivedScales& d,
                               std::optional<ExponentFit> fit) {
    ExponentReport r;
    r.S = S;
    r.theta_hom = theta_hom(p, d);
    r.theta_S = theta_S(S, p, d);
    r.xi_S = xi_S(S, p, d);
    r.fit = fit;
    return r;
}

}  // namespace bosecorr
