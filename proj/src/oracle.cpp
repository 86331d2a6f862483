#include "bosecorr/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bosecorr/errors.hpp"
#include "bosecorr/legendre.hpp"

namespace bosecorr {

namespace {

constexpr double pi = std::numbers::pi;

// Tridiagonal solve, lower[i] couples i to i-1, upper[i] couples i to i+1.
std::vector<double> thomas(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                           std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (diag[i - 1] == 0.0) throw ConsistencyError("fdm: singular tridiagonal system");
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

double face_coeff(double xf, const DerivedScales& d) { return 1.0 - (xf / d.R_c) * (xf / d.R_c); }

double weighted_mean(const std::vector<double>& g, double h) {
    const std::size_t n = g.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (i == 0 || i + 1 == n ? 0.5 : 1.0) * g[i];
    return s * h / (h * static_cast<double>(n - 1));
}

FdmSolution solve_once(double omega, double xp, const PhysicalParams& p, const DerivedScales& d,
                       const FdmGrid& grid, SourceSpread spread) {
    const std::size_t n = grid.nodes.size();
    const double h = grid.h;
    const double hv2 = p.hbar * p.hbar * d.v * d.v;
    const double k2 = omega * omega / hv2;
    const double s = p.g / hv2;

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double vol = (i == 0 || i + 1 == n) ? 0.5 * h : h;
        if (i > 0) {
            const double a = face_coeff(0.5 * (grid.nodes[i - 1] + grid.nodes[i]), d) / h;
            lower[i] = a;
            diag[i] -= a;
        }
        if (i + 1 < n) {
            const double a = face_coeff(0.5 * (grid.nodes[i] + grid.nodes[i + 1]), d) / h;
            upper[i] = a;
            diag[i] -= a;
        }
        diag[i] -= k2 * vol;
    }

    FdmSolution sol;
    const double pos = (xp + grid.half_width) / h;
    if (spread == SourceSpread::SnapToNode) {
        const auto j = static_cast<std::size_t>(std::clamp(std::lround(pos), 0L, static_cast<long>(n - 1)));
        sol.source_node = j;
        sol.snap_offset = grid.nodes[j] - xp;
        sol.source_x = grid.nodes[j];
        rhs[j] += s;
    } else {
        const auto j = static_cast<std::size_t>(std::clamp(static_cast<long>(std::floor(pos)), 0L,
                                                           static_cast<long>(n - 2)));
        const double t = (xp - grid.nodes[j]) / h;
        rhs[j] += s * (1.0 - t);
        rhs[j + 1] += s * t;
        sol.source_node = t < 0.5 ? j : j + 1;
        sol.snap_offset = 0.0;
        sol.source_x = xp;
    }

    if (omega == 0.0) {
        // the exact zero mode carries flux -s/2 out of the left end and +s/2 out of the right
        rhs[0] += -0.5 * s;
        rhs[n - 1] -= 0.5 * s;
        diag[0] = 1.0;
        upper[0] = 0.0;
        rhs[0] = 0.0;
        sol.g = thomas(lower, diag, upper, rhs);
        const double mean = weighted_mean(sol.g, h);
        for (double& v : sol.g) v -= mean;
        sol.gauge_fixed = true;
    } else {
        sol.g = thomas(lower, diag, upper, rhs);
    }
    sol.x = grid.nodes;
    return sol;
}

}  // namespace

FdmGrid FdmGrid::make(std::size_t n_interior, const DerivedScales& d, double clamp) {
    if (n_interior < 100) throw ConfigError("FdmGrid: N must be >= 100");
    if (!(clamp > 0.0 && clamp < 0.5)) throw ConfigError("FdmGrid: clamp must lie in (0, 0.5)");
    FdmGrid g;
    g.N = n_interior;
    g.clamp = clamp;
    g.half_width = (1.0 - clamp) * d.R_c;
    g.h = 2.0 * g.half_width / static_cast<double>(n_interior + 1);
    g.nodes.resize(n_interior + 2);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        g.nodes[i] = -g.half_width + g.h * static_cast<double>(i);
    }
    g.nodes.back() = g.half_width;
    return g;
}

FdmGrid FdmGrid::refined(const DerivedScales& d) const { return make(2 * N + 1, d, clamp); }

double FdmSolution::at(double xq) const {
    if (x.empty()) throw UsageError("FdmSolution::at: empty solution");
    if (xq <= x.front()) return g.front();
    if (xq >= x.back()) return g.back();
    const double h = x[1] - x[0];
    const auto i = std::min(static_cast<std::size_t>((xq - x.front()) / h), x.size() - 2);
    // G has a kink at the source: inside the source cell, extrapolate from the query's side
    if (x[i] < source_x && source_x < x[i + 1]) {
        if (xq <= source_x && i >= 1) return g[i] + (xq - x[i]) / h * (g[i] - g[i - 1]);
        if (xq > source_x && i + 2 < x.size()) return g[i + 1] + (xq - x[i + 1]) / h * (g[i + 2] - g[i + 1]);
    }
    const double t = (xq - x[i]) / h;
    return (1.0 - t) * g[i] + t * g[i + 1];
}

FdmSolution fdm_spectral_solve(double omega, double xp, const PhysicalParams& p, const DerivedScales& d,
                               const FdmGrid& grid, SourceSpread spread, bool estimate_error) {
    if (grid.nodes.size() < 3) throw ConfigError("fdm_spectral_solve: empty grid");
    if (!(std::abs(xp) < grid.half_width)) throw DomainError("fdm_spectral_solve: x' must be interior");
    FdmSolution sol = solve_once(omega, xp, p, d, grid, spread);
    if (estimate_error) {
        // the refined grid contains the snapped node, so both solves see the same source point
        const double xs = (spread == SourceSpread::SnapToNode) ? grid.nodes[sol.source_node] : xp;
        const FdmSolution fine = solve_once(omega, xs, p, d, grid.refined(d), spread);
        double shift = 0.0;
        if (omega == 0.0) {
            for (std::size_t i = 0; i < sol.g.size(); ++i) shift += fine.g[2 * i] - sol.g[i];
            shift /= static_cast<double>(sol.g.size());
        }
        // the outer 10% is excluded: the zero mode is log-singular at the edges
        double err = 0.0;
        for (std::size_t i = 0; i < sol.g.size(); ++i) {
            if (std::abs(sol.x[i]) > 0.9 * grid.half_width) continue;
            err = std::max(err, std::abs(fine.g[2 * i] - shift - sol.g[i]));
        }
        sol.error_estimate = err;
    }
    return sol;
}

namespace {

std::vector<double> lowest_eigenvalues(const DerivedScales& d, const FdmGrid& grid, std::size_t n_levels) {
    const std::size_t n = grid.nodes.size();
    const double h = grid.h;
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
    std::vector<double> vol(n);
    for (std::size_t i = 0; i < n; ++i) vol[i] = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0.0;
        if (i > 0) a += face_coeff(0.5 * (grid.nodes[i - 1] + grid.nodes[i]), d);
        if (i + 1 < n) a += face_coeff(0.5 * (grid.nodes[i] + grid.nodes[i + 1]), d);
        diag[static_cast<Eigen::Index>(i)] = a / (h * vol[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = face_coeff(0.5 * (grid.nodes[i] + grid.nodes[i + 1]), d);
        sub[static_cast<Eigen::Index>(i)] = -a / (h * std::sqrt(vol[i] * vol[i + 1]));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConsistencyError("fdm_eigensolve: eigenvalue iteration failed");
    std::vector<double> out(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) out[k] = es.eigenvalues()[static_cast<Eigen::Index>(k)];
    return out;
}

}  // namespace

EigenReport fdm_eigensolve(const DerivedScales& d, const FdmGrid& grid, std::size_t n_levels) {
    if (n_levels == 0 || n_levels > grid.N / 10) {
        throw ConfigError("fdm_eigensolve: need 1 <= n_levels <= N/10");
    }
    EigenReport r;
    r.raw = lowest_eigenvalues(d, grid, n_levels);
    const auto fine = lowest_eigenvalues(d, grid.refined(d), n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
        r.extrapolated.push_back((4.0 * fine[k] - r.raw[k]) / 3.0);
        const double nn = static_cast<double>(k);
        r.expected.push_back(nn * (nn + 1.0) / (d.R_c * d.R_c));
    }
    return r;
}

BruteSum brute_frequency_sum(double theta, long l_max) {
    if (l_max < 1000) throw ConfigError("brute_frequency_sum: l_max must be >= 1000");
    if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("brute_frequency_sum: theta must lie in [0, 1]");
    long double s = 0.0L;
    const long double tp = 2.0L * std::numbers::pi_v<long double> * theta;
    for (long l = l_max; l >= 1; --l) {
        const long double ll = static_cast<long double>(l);
        s += std::cos(tp * ll) / (ll * ll);
    }
    return {static_cast<double>(s), pi * pi * (theta * theta - theta + 1.0 / 6.0)};
}

double brute_legendre_series(double x, double xp, double dtau, const PhysicalParams& p,
                             const DerivedScales& d, long n_max) {
    if (n_max < 1000) throw ConfigError("brute_legendre_series: n_max must be >= 1000");
    if (!(dtau > 0.0 && dtau < p.beta)) throw DomainError("brute_legendre_series: need 0 < dtau < beta");
    const double u = x / d.R_c, up = xp / d.R_c;
    if (!(std::abs(u) <= 1.0 && std::abs(up) <= 1.0)) throw DomainError("brute_legendre_series: |x| > R_c");
    std::vector<double> terms(static_cast<std::size_t>(n_max));
    double a0 = 1.0, a1 = u, b0 = 1.0, b1 = up;
    for (long n = 1; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        const double r = std::sqrt(nn * (nn + 1.0));
        terms[static_cast<std::size_t>(n - 1)] = (nn + 0.5) / r * a1 * b1 * std::exp(-r * dtau / d.alpha);
        const double a2 = ((2.0 * nn + 1.0) * u * a1 - nn * a0) / (nn + 1.0);
        const double b2 = ((2.0 * nn + 1.0) * up * b1 - nn * b0) / (nn + 1.0);
        a0 = a1;
        a1 = a2;
        b0 = b1;
        b1 = b2;
    }
    long double s = 0.0L;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) s += *it;
    const double r = dtau / p.beta;
    const double bracket = -(p.g * p.beta / (4.0 * d.R_c)) * ((0.5 - r) * (0.5 - r) - 1.0 / 12.0);
    return bracket - p.g / (2.0 * p.hbar * d.v) * static_cast<double>(s);
}

OdeResidual spectral_ode_residual(double omega, double x, double xp, const PhysicalParams& p,
                                  const DerivedScales& d, double h) {
    if (!(h > 0.0)) throw ConfigError("spectral_ode_residual: h must be > 0");
    if (!(std::abs(x - xp) > 2.0 * h)) throw DomainError("spectral_ode_residual: stencil touches x'");
    const double hv2 = p.hbar * p.hbar * d.v * d.v;
    const double k2 = omega * omega / hv2;
    auto G = [&](double xx) { return spectral_density(omega, xx, xp, p, d).value; };
    auto a = [&](double xx) { return face_coeff(xx, d); };
    const cplx g0 = G(x);
    auto apply = [&](double hh, double& scale) {
        const cplx gp = G(x + hh), gm = G(x - hh);
        const cplx flux = (a(x + 0.5 * hh) * (gp - g0) - a(x - 0.5 * hh) * (g0 - gm)) / (hh * hh);
        const cplx g2 = (gp - 2.0 * g0 + gm) / (hh * hh);
        const cplx g1 = (gp - gm) / (2.0 * hh);
        scale = k2 * std::abs(g0) + a(x) * std::abs(g2) + 2.0 * std::abs(x) / (d.R_c * d.R_c) * std::abs(g1);
        return flux - k2 * g0;
    };
    double s1 = 0.0, s2 = 0.0;
    const cplx l1 = apply(h, s1);
    const cplx l2 = apply(2.0 * h, s2);
    OdeResidual r;
    r.residual = std::abs((4.0 * l1 - l2) / 3.0);
    r.scale = s1;
    r.norm = std::abs(g0);
    return r;
}

JumpCheck spectral_jump(double omega, double xp, const PhysicalParams& p, const DerivedScales& d, double h) {
    if (!(h > 0.0)) throw ConfigError("spectral_jump: h must be > 0");
    auto G = [&](double xx) { return spectral_density(omega, xx, xp, p, d).value.real(); };
    const double g0 = G(xp);
    const double right = (G(xp + h) - g0) / h;
    const double left = (g0 - G(xp - h)) / h;
    JumpCheck j;
    j.numeric = face_coeff(xp, d) * (right - left);
    j.expected = p.g / (p.hbar * p.hbar * d.v * d.v);
    return j;
}

}  // namespace bosecorr
