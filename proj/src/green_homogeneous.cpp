#include "bosecorr/green_homogeneous.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bosecorr/errors.hpp"

namespace bosecorr {

namespace {

constexpr double pi = std::numbers::pi;

void check_slab(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                const DerivedScales& d, const char* who) {
    for (auto pt : {a, b}) {
        if (!(std::abs(pt.x) <= d.R_c)) {
            throw DomainError(std::string(who) + ": |x| must not exceed R_c");
        }
        if (!(pt.tau >= 0.0 && pt.tau <= p.beta)) {
            throw DomainError(std::string(who) + ": tau must lie in [0, beta]");
        }
    }
}

// theta in [0, 1)
double frac(double t) {
    double f = t - std::floor(t);
    return f >= 1.0 ? 0.0 : f;
}

}  // namespace

double bernoulli_cos_sum(int m, double theta) {
    const double t = frac(theta);
    switch (m) {
        case 1: return pi * pi * (t * t - t + 1.0 / 6.0);
        case 2: {
            const double b4 = t * t * (t * t - 2.0 * t + 1.0) - 1.0 / 30.0;
            return -std::pow(pi, 4) * b4 / 3.0;
        }
        case 3: {
            const double t2 = t * t;
            const double b6 = t2 * t2 * t2 - 3.0 * t2 * t2 * t + 2.5 * t2 * t2 - 0.5 * t2 + 1.0 / 42.0;
            return 2.0 * std::pow(pi, 6) * b6 / 45.0;
        }
        default: throw UsageError("bernoulli_cos_sum: m must be 1, 2 or 3");
    }
}

double log_abs_2sinh(cplx z) {
    if (z.real() < 0.0) z = -z;
    // |2 sinh z| = e^{Re z} |1 - e^{-2z}|
    const cplx w = std::exp(-2.0 * z);
    const double r = std::abs(1.0 - w);
    return z.real() + std::log(r);
}

GreenValue homog_series(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                        const DerivedScales& d, const HomogSeriesControl& ctl) {
    if (ctl.l_max < 1 || ctl.n_max < 1) {
        throw ConfigError("homog_series: l_max and n_max must be >= 1");
    }
    check_slab(a, b, p, d, "homog_series");

    const double dx = a.x - b.x;
    const double dtau = a.tau - b.tau;
    const long L = ctl.l_max;
    const long N = ctl.n_max;
    const double w1 = 2.0 * pi / p.beta;
    const double e1 = p.hbar * d.v * pi / d.R_c;

    std::vector<double> cl(L + 1), cn(N + 1);
    for (long l = 0; l <= L; ++l) cl[l] = std::cos(w1 * static_cast<double>(l) * dtau);
    for (long n = 0; n <= N; ++n) cn[n] = std::cos(pi * static_cast<double>(n) * dx / d.R_c);

    // Frequency-tail moments: T_m = sum_{l > L} cos(w_l dtau) / l^(2m).
    double tail_m[4] = {0.0, 0.0, 0.0, 0.0};
    const double theta = dtau / p.beta;
    if (ctl.tail == TailMode::Bernoulli) {
        for (int m = 1; m <= 3; ++m) {
            double head = 0.0;
            for (long l = L; l >= 1; --l) {
                head += cl[l] / std::pow(static_cast<double>(l), 2 * m);
            }
            tail_m[m] = bernoulli_cos_sum(m, theta) - head;
        }
    }
    const double wscale = p.beta / (2.0 * pi);  // 1/w_l = wscale / l
    const double wL1 = w1 * static_cast<double>(L + 1);

    // line[n] accumulates the frequency sum of wavenumber line n, l ascending
    std::vector<double> line(N + 1, 0.0);
    double last_l_shell = 0.0;
    double last_n_shell = 0.0;
    for (long l = 0; l <= L; ++l) {
        const double w = w1 * static_cast<double>(l);
        const double ml = (l == 0) ? 1.0 : 2.0;
        double row = 0.0;
        for (long n = 0; n <= N; ++n) {
            if (l == 0 && n == 0) continue;
            const double e = e1 * static_cast<double>(n);
            const double mn = (n == 0) ? 1.0 : 2.0;
            const double term = ml * mn * cl[l] * cn[n] / (w * w + e * e);
            line[n] += term;
            row += term;
            if (n == N) last_n_shell += std::abs(term);
        }
        if (l == L) last_l_shell = std::abs(row);
    }

    double untreated_tail = 0.0;
    if (ctl.tail == TailMode::Bernoulli) {
        const double t = frac(theta) * p.beta;
        for (long n = 0; n <= N; ++n) {
            const double e = e1 * static_cast<double>(n);
            const double mn = (n == 0) ? 1.0 : 2.0;
            if (e <= 0.5 * wL1) {
                const double s2 = wscale * wscale;
                const double e2 = e * e;
                const double tl = tail_m[1] * s2 - e2 * tail_m[2] * s2 * s2 +
                                  e2 * e2 * tail_m[3] * s2 * s2 * s2;
                line[n] += 2.0 * mn * cn[n] * tl;
            } else {
                // expansion in E/w is useless here: take the whole line in closed form,
                // sum_l e^{i w t}/(w^2+E^2) = beta (e^{-E t} + e^{-E(beta-t)}) / (2E (1 - e^{-beta E}))
                const double full = p.beta * (std::exp(-e * t) + std::exp(-e * (p.beta - t))) /
                                    (2.0 * e * -std::expm1(-p.beta * e));
                line[n] = mn * cn[n] * full;
            }
        }
    } else {
        for (long n = 0; n <= N; ++n) {
            const double e = e1 * static_cast<double>(n);
            const double mn = (n == 0) ? 1.0 : 2.0;
            untreated_tail += (n == 0) ? 2.0 * wscale * wscale / static_cast<double>(L)
                                       : 2.0 * mn * wscale * (0.5 * pi - std::atan(wL1 / e)) / e;
        }
        // the oscillating factor makes the true tail much smaller; keep the shell size as a floor
        untreated_tail = std::min(untreated_tail, 2.0 * last_l_shell * static_cast<double>(L));
    }
    double sum = 0.0;
    for (long n = 0; n <= N; ++n) sum += line[n];

    const double pref = -p.g / (2.0 * p.beta * d.R_c);
    GreenValue g;
    g.method = GreenMethod::HomogSeries;
    g.value = cplx(pref * sum, 0.0);
    const double coarse = (ctl.tail == TailMode::Bernoulli) ? 0.0 : last_l_shell;
    // wavenumber tail: geometric when the lines decay in n (t > 0), Dirichlet-bounded otherwise
    const double t_red = std::min(frac(theta), 1.0 - frac(theta)) * p.beta;
    const double geo = (t_red > 0.0) ? 1.0 / -std::expm1(-e1 * t_red) : INFINITY;
    const double dir = std::abs(std::sin(pi * dx / (2.0 * d.R_c)));
    const double n_factor = std::min(geo, dir > 0.0 ? 1.0 / dir : INFINITY);
    const double n_tail = std::max(std::abs(line[N]), last_n_shell) * n_factor;
    g.trunc_err = std::abs(pref) * (coarse + n_tail + untreated_tail);

    const double ph = frac(theta);
    const double px = frac(dx / (2.0 * d.R_c));
    if (ph == 0.0 && px == 0.0) {
        g.divergent = true;
        g.notice = "divergence warning: coincident arguments, the series diverges logarithmically";
    }
    return g;
}

namespace {

GreenValue asympt_common(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                         const DerivedScales& d, bool high, const char* who) {
    const double dx = a.x - b.x;
    const double dtau = a.tau - b.tau;
    if (!(std::abs(dx) <= 2.0 * d.R_c) || !(std::abs(dtau) <= p.beta)) {
        throw DomainError(std::string(who) + ": requires |x - x'| <= 2 R_c and |tau - tau'| <= beta");
    }
    GreenValue g;
    g.method = high ? GreenMethod::HomogAsymptHighT : GreenMethod::HomogAsymptLowT;
    g.constant_undetermined = true;
    g.notice = "undetermined additive constant";
    const double hv = p.hbar * d.v;
    if (dx == 0.0 && (dtau == 0.0 || (high && std::abs(dtau) == p.beta))) {
        g.divergent = true;
        g.notice = "divergent: coincident points";
        return g;
    }
    const double pref = p.g / (2.0 * pi * hv);
    double value;
    if (high) {
        const cplx z = (pi / d.lambda_T) * cplx(std::abs(dx), hv * dtau);
        value = pref * log_abs_2sinh(z) - (p.g / (4.0 * p.beta * d.R_c)) * dx * dx / (hv * hv);
    } else {
        const cplx z = cplx(0.0, pi / (2.0 * d.R_c)) * cplx(std::abs(dx), hv * dtau);
        value = pref * log_abs_2sinh(z) - (p.g / (4.0 * p.beta * d.R_c)) * dtau * dtau;
    }
    if (!std::isfinite(value)) {
        g.divergent = true;
        g.notice = "divergent: coincident points";
        return g;
    }
    g.value = cplx(value, 0.0);
    return g;
}

}  // namespace

GreenValue homog_asymptotic_highT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                  const DerivedScales& d) {
    return asympt_common(a, b, p, d, true, "homog_asymptotic_highT");
}

GreenValue homog_asymptotic_lowT(SpacetimePoint a, SpacetimePoint b, const PhysicalParams& p,
                                 const DerivedScales& d) {
    return asympt_common(a, b, p, d, false, "homog_asymptotic_lowT");
}

}  // namespace bosecorr
