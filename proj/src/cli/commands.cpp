#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <thread>

#include "bosecorr/cli.hpp"
#include "bosecorr/correlator.hpp"
#include "bosecorr/errors.hpp"
#include "bosecorr/green_homogeneous.hpp"
#include "bosecorr/green_trapped.hpp"
#include "bosecorr/oracle.hpp"
#include "cli_internal.hpp"

namespace bosecorr::cli {

namespace {

constexpr double pi = std::numbers::pi;

struct Pair {
    double x1, tau1, x2, tau2;
};

std::vector<double> linspace(double a, double b, long n) {
    std::vector<double> v;
    for (long i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    return v;
}

std::vector<double> logspace(double a, double b, long n) {
    std::vector<double> v;
    for (double t : linspace(std::log(a), std::log(b), n)) v.push_back(std::exp(t));
    return v;
}

std::vector<Pair> make_pairs(const GridSpec& g) {
    std::vector<Pair> out;
    if (g.sep_count > 0) {
        for (double s : logspace(g.sep_min, g.sep_max, g.sep_count)) {
            out.push_back({g.S + 0.5 * s, g.tau1, g.S - 0.5 * s, g.tau2});
        }
    } else {
        for (double x : linspace(g.x_min, g.x_max, g.x_count)) out.push_back({x, g.tau1, g.x2, g.tau2});
    }
    return out;
}

// Per-row failure classification; the status column carries it instead of aborting.
struct RowError {
    std::string status;
    std::string notice;
};

template <class F>
std::optional<RowError> guarded(F&& f) {
    try {
        f();
        return std::nullopt;
    } catch (const DivergenceError& e) {
        return RowError{"divergent", e.what()};
    } catch (const RegimeError& e) {
        return RowError{"regime_error", e.what()};
    } catch (const AccuracyError& e) {
        return RowError{"accuracy_error", e.what()};
    } catch (const DomainError& e) {
        return RowError{"domain_error", e.what()};
    } catch (const ConsistencyError& e) {
        return RowError{"consistency_error", e.what()};
    }
}

LowTControl lowT_control(const RunConfig& c) {
    LowTControl l;
    l.n0 = c.truncation.n0;
    l.min_dtau = c.truncation.min_dtau;
    l.enforce_gate = c.truncation.enforce_gate;
    l.thresholds = c.thresholds;
    return l;
}

AssemblyControl assembly_control(const RunConfig& c) {
    AssemblyControl a;
    a.l_max = c.truncation.l_max;
    a.rel_tol = c.truncation.rel_tol;
    return a;
}

HomogSeriesControl homog_control(const RunConfig& c) {
    return {c.truncation.homog_l_max, c.truncation.homog_n_max,
            c.truncation.homog_tail == "none" ? TailMode::None : TailMode::Bernoulli};
}

Cell opt(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

std::optional<double> safe_theta_S(double S, const PhysicalParams& p, const DerivedScales& d) {
    return rho_tf(S, p, d) > 0.0 ? std::optional(theta_S(S, p, d)) : std::nullopt;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& cfg, const std::string& command,
                                                              const std::string& mode) {
    const auto d = derive_scales(cfg.params);
    std::vector<std::pair<std::string, std::string>> m{
        {"program", std::string("bosecorr ") + kVersion},
        {"command", command},
    };
    if (!mode.empty()) m.emplace_back("mode", mode);
    m.emplace_back("derived.v", format_number(d.v));
    m.emplace_back("derived.R_c", format_number(d.R_c));
    m.emplace_back("derived.alpha", format_number(d.alpha));
    m.emplace_back("derived.lambda_T", format_number(d.lambda_T));
    m.emplace_back("derived.regime_ratio", format_number(d.regime_ratio));
    m.emplace_back("derived.regime", std::string(to_string(classify_regime(d, cfg.thresholds))));
    for (auto& e : config_entries(cfg)) m.push_back(std::move(e));
    return m;
}

Table cmd_density(const RunConfig& cfg) {
    const auto d = derive_scales(cfg.params);
    Table t;
    t.metadata = run_metadata(cfg, "density", "");
    t.columns = {"x", "rho_tf"};
    for (double x : linspace(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.x_count)) {
        t.rows.push_back({x, rho_tf(x, cfg.params, d)});
    }
    return t;
}

Table cmd_spectrum(const RunConfig& cfg) {
    const auto d = derive_scales(cfg.params);
    Table t;
    t.metadata = run_metadata(cfg, "spectrum", "");
    t.columns = {"n", "E_n", "dE", "dE_expansion"};
    for (long n = 0; n < cfg.grid.n_max; ++n) {
        const double dE = n >= 1 ? level_spacing_expansion(n, d).exact : energy_level(1, d);
        const Cell ex = n >= 1 ? Cell(level_spacing_expansion(n, d).expansion) : Cell();
        t.rows.push_back({static_cast<long long>(n), energy_level(n, d), dE, ex});
    }
    return t;
}

Table cmd_green(const RunConfig& cfg, const std::string& mode, unsigned threads) {
    static const std::vector<std::string> modes{"homog-series",  "homog-asympt",   "trapped-spectral",
                                                "trapped-series", "trapped-asympt", "oracle"};
    if (std::find(modes.begin(), modes.end(), mode) == modes.end()) {
        throw UsageError("green: unknown mode '" + mode + "'");
    }
    const auto& p = cfg.params;
    const auto d = derive_scales(p);
    const Regime regime = classify_regime(d, cfg.thresholds);
    const bool per_frequency = (mode == "trapped-spectral" && !cfg.grid.matsubara.empty()) || mode == "oracle";
    const bool const_free = mode == "homog-asympt" || mode == "trapped-asympt";
    std::vector<long> freqs = cfg.grid.matsubara;
    if (mode == "oracle" && freqs.empty()) freqs = {0};
    if (!per_frequency) freqs = {0};

    Table t;
    t.metadata = run_metadata(cfg, "green", mode);
    if (per_frequency) t.columns.push_back("omega");
    for (const char* c : {"x1", "tau1", "x2", "tau2", "G_re", "G_im", "method", "trunc_err", "regime", "window_slack",
                          "status", "notice"}) {
        t.columns.push_back(c);
    }
    if (const_free) t.columns.push_back("const_free");

    const auto pairs = make_pairs(cfg.grid);
    std::vector<std::vector<Cell>> rows(freqs.size() * pairs.size());
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        const double omega = 2.0 * pi * static_cast<double>(freqs[k / pairs.size()]) / p.beta;
        const Pair& pr = pairs[k % pairs.size()];
        const SpacetimePoint a{pr.x1, pr.tau1}, b{pr.x2, pr.tau2};
        GreenValue g;
        std::string method;
        const auto err = guarded([&] {
            if (mode == "homog-series") {
                g = homog_series(a, b, p, d, homog_control(cfg));
            } else if (mode == "homog-asympt") {
                if (regime == Regime::HighT) {
                    g = homog_asymptotic_highT(a, b, p, d);
                } else if (regime == Regime::LowT) {
                    g = homog_asymptotic_lowT(a, b, p, d);
                } else {
                    throw RegimeError("homog-asympt: intermediate regime, no asymptotic form applies");
                }
            } else if (mode == "trapped-spectral") {
                if (per_frequency) {
                    const auto s = spectral_density(omega, pr.x1, pr.x2, p, d);
                    g.value = s.value;
                    g.method = GreenMethod::TrappedSpectral;
                    g.trunc_err = s.error_bound * std::abs(s.value);
                    method = "spectral_density";
                } else {
                    g = matsubara_assemble(a, b, p, d, assembly_control(cfg));
                }
            } else if (mode == "trapped-series") {
                g = lowT_legendre_series(a, b, p, d, lowT_control(cfg));
            } else if (mode == "trapped-asympt") {
                if (regime == Regime::HighT) {
                    g = asympt_green_highT(a, b, p, d, cfg.window);
                } else if (regime == Regime::LowT) {
                    g = asympt_green_lowT(a, b, p, d, lowT_control(cfg), cfg.window);
                } else {
                    throw RegimeError("trapped-asympt: intermediate regime, no asymptotic form applies");
                }
            } else {
                const auto grid = FdmGrid::make(static_cast<std::size_t>(cfg.truncation.fdm_n), d);
                const auto s = fdm_spectral_solve(omega, pr.x2, p, d, grid, SourceSpread::Linear);
                // the zero mode is fixed only up to a constant: report it in the
                // spectral route's gauge, G(x', x') = 0, so the two modes compare directly
                g.value = s.at(pr.x1) - (omega == 0.0 ? s.at(pr.x2) : 0.0);
                g.method = GreenMethod::Oracle;
                g.trunc_err = s.error_estimate;
                method = "fdm_oracle";
            }
        });
        auto& row = rows[k];
        if (per_frequency) row.push_back(omega);
        row.insert(row.end(), {pr.x1, pr.tau1, pr.x2, pr.tau2});
        std::string status = "ok", notice = g.notice;
        if (err) {
            status = err->status;
            notice = err->notice;
            method = mode;
        } else if (g.divergent) {
            status = "divergent";
        }
        if (status == "ok") {
            row.insert(row.end(), {g.value.real(), g.value.imag()});
        } else {
            row.insert(row.end(), {Cell(), Cell()});
        }
        row.push_back(method.empty() ? std::string(to_string(g.method)) : method);
        row.push_back(status == "ok" ? Cell(g.trunc_err) : Cell());
        row.push_back(std::string(to_string(regime)));
        row.push_back(status == "ok" ? Cell(g.window_slack) : Cell());
        row.push_back(status);
        row.push_back(notice);
        if (const_free) row.push_back(true);
    });
    t.rows = std::move(rows);
    return t;
}

namespace {

struct CorrRow {
    std::optional<double> gamma;
    std::string method;
    double slack = 0.0;
    std::string status = "ok";
    std::string notice;
};

CorrRow correlator_row(const RunConfig& cfg, const DerivedScales& d, const std::string& mode, const Pair& pr) {
    const auto& p = cfg.params;
    const CorrelatorQuery q{pr.x1, pr.tau1, pr.x2, pr.tau2};
    CorrRow r;
    auto from_green = [&](const std::string& which) {
        GreenValue g12, g21;
        if (which == "spectral") {
            g12 = matsubara_assemble(q.first(), q.second(), p, d, assembly_control(cfg));
            g21 = matsubara_assemble(q.second(), q.first(), p, d, assembly_control(cfg));
        } else {
            g12 = lowT_legendre_series(q.first(), q.second(), p, d, lowT_control(cfg));
            g21 = lowT_legendre_series(q.second(), q.first(), p, d, lowT_control(cfg));
        }
        const auto v = gamma_from_green(q, g12, g21, p, d);
        r.gamma = v.gamma;
        r.method = v.form;
        r.slack = v.window_slack;
    };
    const auto err = guarded([&] {
        if (mode == "closed-form") {
            if (pr.tau1 != pr.tau2) throw DomainError("closed-form: the exact trapped correlator is equal-time only");
            r.gamma = gamma_d1_exact(pr.x1, pr.x2, p, d);
            r.method = "closed_form_exact";
        } else if (mode == "spectral" || mode == "series") {
            from_green(mode);
        } else {
            try {
                const auto v = gamma_trapped_asymptotic(q, p, d, TrappedForm::Auto, cfg.window, cfg.thresholds);
                r.gamma = v.gamma;
                r.method = v.form;
                r.slack = v.window_slack;
            } catch (const RegimeError& e) {
                // never extrapolate an asymptotic form outside its window
                const bool lowT = classify_regime(d, cfg.thresholds) == Regime::LowT;
                r.notice = std::string("asymptotic window not satisfied, series result used: ") + e.what();
                from_green(lowT ? "series" : "spectral");
            }
        }
    });
    if (err) {
        r.gamma.reset();
        r.status = err->status;
        r.notice = r.notice.empty() ? err->notice : r.notice + "; " + err->notice;
    }
    return r;
}

void check_correlator_mode(const std::string& mode, const char* who) {
    static const std::vector<std::string> modes{"series", "spectral", "asymptotic-auto", "closed-form"};
    if (std::find(modes.begin(), modes.end(), mode) == modes.end()) {
        throw UsageError(std::string(who) + ": unknown mode '" + mode + "'");
    }
}

}  // namespace

Table cmd_correlator(const RunConfig& cfg, const std::string& mode, unsigned threads) {
    check_correlator_mode(mode, "correlator");
    const auto& p = cfg.params;
    const auto d = derive_scales(p);
    Table t;
    t.metadata = run_metadata(cfg, "correlator", mode);
    t.columns = {"x1", "tau1", "x2", "tau2", "S", "gamma", "theta_S", "xi_S", "method", "window_slack", "status",
                 "notice"};
    const auto pairs = make_pairs(cfg.grid);
    std::vector<std::vector<Cell>> rows(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const Pair& pr = pairs[k];
        const auto r = correlator_row(cfg, d, mode, pr);
        const double S = 0.5 * (pr.x1 + pr.x2);
        const auto th = safe_theta_S(S, p, d);
        rows[k] = {pr.x1, pr.tau1, pr.x2, pr.tau2, S, opt(r.gamma), opt(th),
                   th ? Cell(xi_S(S, p, d)) : Cell(), r.method, r.status == "ok" ? Cell(r.slack) : Cell(),
                   r.status, r.notice};
    });
    t.rows = std::move(rows);
    return t;
}

Table cmd_exponent(const RunConfig& cfg, const std::string& mode, unsigned threads) {
    check_correlator_mode(mode, "exponent");
    if (cfg.grid.sep_count < 8) throw ConfigError("exponent: grid.sep_count must be >= 8 (log-spaced separations)");
    const auto& p = cfg.params;
    const auto d = derive_scales(p);
    const auto pairs = make_pairs(cfg.grid);
    std::vector<CorrRow> res(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) { res[k] = correlator_row(cfg, d, mode, pairs[k]); });

    std::vector<ExponentSample> samples;
    std::string method, notice;
    std::size_t failed = 0;
    bool accuracy = false;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (!res[k].gamma) {
            ++failed;
            accuracy = accuracy || res[k].status == "accuracy_error";
            if (notice.empty()) notice = res[k].status + ": " + res[k].notice;
            continue;
        }
        const Pair& pr = pairs[k];
        const double sep = std::abs(cplx(std::abs(pr.x1 - pr.x2), p.hbar * d.v * (pr.tau1 - pr.tau2)));
        samples.push_back({sep, *res[k].gamma, rho_tf(pr.x1, p, d) * rho_tf(pr.x2, p, d)});
        method = res[k].method;
    }
    if (failed > 0 && accuracy) {
        throw AccuracyError("exponent: " + std::to_string(failed) + " of " + std::to_string(pairs.size()) +
                                " correlator rows failed (" + notice + ")",
                            NAN);
    }
    if (failed > 0) {
        throw DataError("exponent: " + std::to_string(failed) + " of " + std::to_string(pairs.size()) +
                        " correlator rows failed (" + notice + ")");
    }
    const auto fit = extract_exponent(samples);
    const auto rep = exponent_report(cfg.grid.S, p, d, fit);

    Table t;
    t.metadata = run_metadata(cfg, "exponent", mode);
    t.columns = {"S", "theta_hom", "theta_S", "xi_S", "fit_inv_theta", "fit_std_error", "fit_theta",
                 "inv_theta_S", "rel_deviation", "samples", "sep_min", "sep_max", "method"};
    t.rows.push_back({rep.S, rep.theta_hom, rep.theta_S, rep.xi_S, fit.inv_theta, fit.std_error, fit.theta,
                      1.0 / rep.theta_S, fit.inv_theta * rep.theta_S - 1.0, static_cast<long long>(fit.samples),
                      fit.sep_min, fit.sep_max, method});
    return t;
}

}  // namespace bosecorr::cli
