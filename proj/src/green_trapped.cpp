#include "bosecorr/green_trapped.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bosecorr/errors.hpp"
#include "bosecorr/green_homogeneous.hpp"

namespace bosecorr {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

void check_interior(double x, const DerivedScales& d, double clamp, const char* who) {
    if (!(std::abs(x) <= (1.0 - clamp) * d.R_c)) {
        std::ostringstream os;
        os << who << ": |x| = " << std::abs(x) << " exceeds (1 - " << clamp << ") R_c";
        throw DomainError(os.str());
    }
}

void check_tau(double tau, const PhysicalParams& p, const char* who) {
    if (!(tau >= 0.0 && tau <= p.beta)) throw DomainError(std::string(who) + ": tau must lie in [0, beta]");
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
        if (!s.empty()) s += "; ";
        s += e;
    }
    return s;
}

}  // namespace

SpectralDensity spectral_density(double omega, double x, double xp, const PhysicalParams& p,
                                 const DerivedScales& d, const LegendreControl& ctl, double clamp) {
    check_interior(x, d, clamp, "spectral_density");
    check_interior(xp, d, clamp, "spectral_density");
    SpectralDensity s;
    s.omega = omega;
    s.x = x;
    s.xp = xp;
    s.nu = nu_from_omega(omega, d);

    const double ug = std::max(x, xp) / d.R_c;
    const double ul = std::min(x, xp) / d.R_c;
    const GreenFactors fg = green_factors(s.nu, ug, ctl);
    const GreenFactors fl = (x == xp) ? fg : green_factors(s.nu, ul, ctl);
    const double c0 = p.g * d.R_c / (2.0 * p.hbar * p.hbar * d.v * d.v);

    // With f = Q - i pi/2 P and h = Q + i pi/2 P:
    //   Q(x)P(x') - Q(x')P(x) = (f> h< - h> f<) / (i pi)
    //   (2/pi) Q Q' + (pi/2) P P' = (f> h< + h> f<) / pi
    const Scaled fh = fg.q_minus * fl.q_plus;
    const Scaled hf = fg.q_plus * fl.q_minus;
    s.re_part = (x == xp) ? Scaled() : (fh - hf) * cplx(0.0, -c0 / pi);
    s.im_part = (fh + hf) * cplx(-c0 / pi, 0.0);
    s.value = (fh * cplx(0.0, -2.0 * c0 / pi)).value();
    s.error_bound = std::max(fg.error_bound, fl.error_bound);
    return s;
}

GreenValue matsubara_assemble(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                              const DerivedScales& d, const AssemblyControl& ctl) {
    if (ctl.l_max < 0) throw ConfigError("matsubara_assemble: l_max must be >= 0");
    check_tau(a.tau, p, "matsubara_assemble");
    check_tau(b.tau, p, "matsubara_assemble");
    const double dtau = a.tau - b.tau;
    const double dx = std::abs(a.x - b.x);

    const SpectralDensity s0 = spectral_density(0.0, a.x, b.x, p, d, ctl.legendre, ctl.clamp);
    GreenValue g;
    g.method = GreenMethod::TrappedSpectral;
    g.phase_term = I * s0.im_part.value() / p.beta;
    cplx sum = s0.re_part.value();

    const double w1 = 2.0 * pi / p.beta;
    double last = 0.0, prev = 0.0;
    long l = 1;
    int small = 0;
    for (; l <= ctl.l_max; ++l) {
        const double w = w1 * static_cast<double>(l);
        const cplx gw = spectral_density(w, a.x, b.x, p, d, ctl.legendre, ctl.clamp).value;
        const cplx term = 2.0 * std::cos(w * dtau) * gw;
        sum += term;
        prev = last;
        last = 2.0 * std::abs(gw);
        if (last <= 1e-17 * std::abs(sum)) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
    }
    const bool stopped_early = l <= ctl.l_max;
    g.value = sum / p.beta;

    double tail = 0.0;
    if (!stopped_early && ctl.l_max > 0) {
        const double tl = last / p.beta;
        double geo = INFINITY;
        const double r = (dx > 0.0) ? std::exp(-w1 * dx / (p.hbar * d.v)) : 1.0;
        if (r < 1.0) geo = tl * r / (1.0 - r);
        if (ctl.l_max >= 2 && prev > 0.0 && last < prev) {
            const double rm = last / prev;
            geo = std::min(geo, tl * rm / (1.0 - rm));
        }
        const double sn = std::abs(std::sin(pi * dtau / p.beta));
        const double dir = (sn > 0.0) ? tl / sn : INFINITY;
        tail = std::min(geo, dir);
    } else if (ctl.l_max == 0) {
        tail = 0.0;  // a single term is the whole requested sum
    }
    g.trunc_err = tail;
    g.notice = "imaginary zero-mode part split off as phase_term";

    const double c0 = p.g * d.R_c / (p.beta * p.hbar * p.hbar * d.v * d.v);
    if (ctl.strict && ctl.l_max > 0 && !(tail <= ctl.rel_tol * std::max(std::abs(g.value), c0))) {
        std::ostringstream os;
        os << "matsubara_assemble: frequency sum not converged at l_max = " << ctl.l_max
           << " (tail estimate " << tail << "); |x - x'| and |tau - tau'| are too small";
        throw AccuracyError(os.str(), tail);
    }
    return g;
}

double closed_form_zero_mode(double x, double xp, const PhysicalParams& p, const DerivedScales& d) {
    const double a = std::abs(x - xp) / (2.0 * d.R_c);
    const double s = (x + xp) / (2.0 * d.R_c);
    const double num = (1.0 + a) * (1.0 + a) - s * s;
    const double den = (1.0 - a) * (1.0 - a) - s * s;
    if (!(den > 0.0) || !(num > 0.0)) {
        throw DomainError("closed_form_zero_mode: log argument not positive (points too close to the edge)");
    }
    // num - den = 4a exactly
    const double hv = p.hbar * d.v;
    return p.g * d.R_c / (p.beta * 4.0 * hv * hv) * std::log1p(4.0 * a / den);
}

double u_star(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p, const DerivedScales& d) {
    return std::abs(cplx(std::abs(a.x - b.x), p.hbar * d.v * (a.tau - b.tau))) / d.R_c;
}

std::vector<std::string> lowT_gate_violations(long n0, double ustar) {
    std::vector<std::string> v;
    if (n0 < 5) v.push_back("n0 >= 5 (1 << n0) violated: n0 = " + std::to_string(n0));
    if (!(static_cast<double>(n0) * ustar < 1.0)) {
        std::ostringstream os;
        os << "n0 * u_* < 1 violated: n0 * u_* = " << static_cast<double>(n0) * ustar;
        v.push_back(os.str());
    }
    return v;
}

namespace {

// -(g/2 hbar v) * [head + closed tail] for crossover index n0
double lowT_sum(double u, double up, double dtau, long n0, AsymptoticPhase phase,
                const DerivedScales& d) {
    const double th = std::acos(u);
    const double thp = std::acos(up);
    double head = 0.0;
    for (long n = 1; n <= n0; ++n) {
        const double nn = static_cast<double>(n);
        const double root = std::sqrt(nn * (nn + 1.0));
        const double exact = (nn + 0.5) / root * p_poly(n, u) * p_poly(n, up) * std::exp(-root * dtau / d.alpha);
        const double asym = p_poly_asymptotic(n, th, phase) * p_poly_asymptotic(n, thp, phase) *
                            std::exp(-(nn + 0.5) * dtau / d.alpha);
        head += exact - asym;
    }
    // sum_{n>=1} t^n/n cos(n phi + c) = Re[e^{ic} (-log(1 - t e^{i phi}))]
    const double t = std::exp(-dtau / d.alpha);
    const double amp2 = 2.0 / (pi * std::sqrt(std::sin(th) * std::sin(thp)));
    const double delta = th - thp;
    const double sigma = th + thp;
    auto lsum = [t](double phi, double c) {
        return (std::exp(I * c) * -std::log(1.0 - t * std::exp(I * phi))).real();
    };
    double tail;
    if (phase == AsymptoticPhase::HalfShifted) {
        tail = lsum(delta, 0.5 * delta) + lsum(sigma, 0.5 * sigma - 0.5 * pi);
    } else {
        tail = lsum(delta, 0.0) + lsum(sigma, -0.5 * pi);
    }
    tail *= 0.5 * amp2 * std::exp(-0.5 * dtau / d.alpha);
    return head + tail;
}

}  // namespace

GreenValue lowT_legendre_series(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                const DerivedScales& d, const LowTControl& ctl) {
    if (ctl.n0 < 1) throw ConfigError("lowT_legendre_series: n0 must be >= 1");
    if (!(ctl.min_dtau > 0.0)) throw ConfigError("lowT_legendre_series: min_dtau must be > 0");
    check_tau(a.tau, p, "lowT_legendre_series");
    check_tau(b.tau, p, "lowT_legendre_series");
    check_interior(a.x, d, ctl.clamp, "lowT_legendre_series");
    check_interior(b.x, d, ctl.clamp, "lowT_legendre_series");
    const double dtau = std::abs(a.tau - b.tau);
    if (dtau == 0.0) throw DomainError("lowT_legendre_series: requires tau != tau' for convergence");
    if (dtau < ctl.min_dtau * p.beta) {
        std::ostringstream os;
        os << "lowT_legendre_series: |tau - tau'| / beta = " << dtau / p.beta << " below min_dtau = "
           << ctl.min_dtau << " (lower min_dtau to accept reduced accuracy)";
        throw DomainError(os.str());
    }
    if (classify_regime(d, ctl.thresholds) != Regime::LowT) {
        throw RegimeError("lowT_legendre_series: requires the low-temperature regime beta/alpha > r_hi");
    }
    const double us = u_star(a, b, p, d);
    if (ctl.enforce_gate) {
        const auto v = lowT_gate_violations(ctl.n0, us);
        if (!v.empty()) throw RegimeError("lowT_legendre_series: " + join(v));
    }

    const double u = a.x / d.R_c;
    const double up = b.x / d.R_c;
    const double r = dtau / p.beta;
    const double bracket = -(p.g * p.beta / (4.0 * d.R_c)) * ((0.5 - r) * (0.5 - r) - 1.0 / 12.0);
    const double pref = p.g / (2.0 * p.hbar * d.v);
    GreenValue g;
    g.method = GreenMethod::TrappedSeries;
    g.value = bracket - pref * lowT_sum(u, up, dtau, ctl.n0, ctl.phase, d);
    g.window_slack = static_cast<double>(ctl.n0) * us;
    if (ctl.report_drift) {
        const double v2 = bracket - pref * lowT_sum(u, up, dtau, 2 * ctl.n0, ctl.phase, d);
        g.n0_drift = std::abs(v2 - g.value.real());
    }
    if (ctl.min_dtau < LowTControl{}.min_dtau) {
        g.notice = "accuracy warning: min_dtau lowered below its default";
    }
    return g;
}

double check_quasihom_window(double x, double xp, const DerivedScales& d, const WindowFactors& w,
                             bool require_s_small, const char* who) {
    if (!(w.much_less > 0.0)) throw ConfigError(std::string(who) + ": window factor must be > 0");
    const double dx = std::abs(x - xp);
    const double s = std::abs(0.5 * (x + xp));
    std::vector<std::string> bad;
    double slack = 0.0;
    auto need = [&](double lhs, double rhs, const char* text) {
        const double ratio = (rhs > 0.0) ? lhs / (w.much_less * rhs) : (lhs > 0.0 ? INFINITY : 0.0);
        slack = std::max(slack, ratio);
        if (ratio > 1.0) {
            std::ostringstream os;
            os << text << " (ratio " << lhs / rhs << " > " << w.much_less << ")";
            bad.push_back(os.str());
        }
    };
    need(dx, s, "|x - x'| << S");
    need(dx, d.R_c, "|x - x'| << R_c");
    if (require_s_small) need(s, d.R_c, "S << R_c");
    if (!bad.empty()) throw RegimeError(std::string(who) + ": outside quasi-homogeneous window: " + join(bad));
    return slack;
}

double asympt_spectral_highT(double omega, double x, double xp, const PhysicalParams& p,
                             const DerivedScales& d, const WindowFactors& w) {
    const double hv = p.hbar * d.v;
    if (!(std::abs(omega) * 2.0 * d.R_c / hv * w.much_less >= 1.0)) {
        throw RegimeError("asympt_spectral_highT: |omega| >> hbar v / (2 R_c) violated");
    }
    check_quasihom_window(x, xp, d, w, true, "asympt_spectral_highT");
    const double rho = rho_tf(0.5 * (x + xp), p, d);
    const double aw = std::abs(omega);
    return -(p.Lambda / (2.0 * hv * rho)) * std::exp(-aw * std::abs(x - xp) / hv) / aw;
}

GreenValue asympt_green_highT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                              const DerivedScales& d, const WindowFactors& w, const RegimeThresholds& t) {
    if (classify_regime(d, t) != Regime::HighT) {
        throw RegimeError("asympt_green_highT: requires the high-temperature regime beta/alpha < r_lo");
    }
    GreenValue g;
    g.method = GreenMethod::TrappedAsymptHighT;
    g.constant_undetermined = true;
    g.window_slack = check_quasihom_window(a.x, b.x, d, w, true, "asympt_green_highT");
    g.notice = "undetermined additive constant; spectral large-|w| form carries the opposite overall sign";
    const double hv = p.hbar * d.v;
    const double rho = rho_tf(0.5 * (a.x + b.x), p, d);
    const cplx z = (pi / d.lambda_T) * cplx(std::abs(a.x - b.x), hv * (a.tau - b.tau));
    const double v = (p.Lambda / (2.0 * pi * hv * rho)) * log_abs_2sinh(z);
    if (!std::isfinite(v)) {
        g.divergent = true;
        g.notice = "divergent: coincident points";
        return g;
    }
    g.value = v;
    return g;
}

GreenValue asympt_green_lowT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                             const DerivedScales& d, const LowTControl& ctl, const WindowFactors& w) {
    if (classify_regime(d, ctl.thresholds) != Regime::LowT) {
        throw RegimeError("asympt_green_lowT: requires the low-temperature regime beta/alpha > r_hi");
    }
    check_interior(a.x, d, ctl.clamp, "asympt_green_lowT");
    check_interior(b.x, d, ctl.clamp, "asympt_green_lowT");
    const double us = u_star(a, b, p, d);
    std::vector<std::string> bad;
    if (!(us <= w.much_less)) {
        std::ostringstream os;
        os << "u_* << 1 violated: u_* = " << us;
        bad.push_back(os.str());
    }
    if (ctl.enforce_gate) {
        for (auto& s : lowT_gate_violations(ctl.n0, us)) bad.push_back(s);
    }
    if (!bad.empty()) throw RegimeError("asympt_green_lowT: " + join(bad));
    GreenValue g;
    g.method = GreenMethod::TrappedAsymptLowT;
    g.constant_undetermined = true;
    g.window_slack = us / w.much_less;
    g.notice = "undetermined additive constant";
    if (us == 0.0) {
        g.divergent = true;
        g.notice = "divergent: coincident points";
        return g;
    }
    const double rho = rho_tf(0.5 * (a.x + b.x), p, d);
    g.value = -(p.Lambda / (2.0 * pi * p.hbar * d.v * rho)) * std::log(1.0 / us);
    return g;
}

}  // namespace bosecorr
