#include <fstream>
#include <iostream>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "bosecorr/cli.hpp"
#include "bosecorr/errors.hpp"
#include "cli_internal.hpp"

namespace bosecorr::cli {

namespace {

struct Options {
    std::string config;
    std::string mode;
    std::string out;
    std::string format;
    unsigned threads = 1;
};

void emit(const Table& t, const RunConfig& cfg, std::ostream& out) {
    auto write = [&](std::ostream& os) {
        if (cfg.output.format == "json") {
            write_json(t, os);
        } else {
            write_csv(t, os);
        }
    };
    if (cfg.output.path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(cfg.output.path);
    if (!f) throw std::runtime_error("cannot open output file " + cfg.output.path);
    write(f);
    if (!f) throw std::runtime_error("write failed: " + cfg.output.path);
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-temperature correlators of a harmonically trapped 1D Bose gas", "bosecorr"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "configuration file (sectioned key = value)");
    app.add_option("--mode", o.mode, "evaluation mode of the subcommand");
    app.add_option("--out", o.out, "output path (default: stdout)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", o.threads, "worker threads for row evaluation")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", "ignored: no computation is randomized");
    const std::pair<const char*, const char*> commands[] = {
        {"density", "Thomas-Fermi density on the x grid"},
        {"spectrum", "trap levels E_n and their spacing"},
        {"green", "phase-correlation Green function (homog-series|homog-asympt|trapped-spectral|trapped-series|"
                  "trapped-asympt|oracle)"},
        {"correlator", "two-point correlator (series|spectral|asymptotic-auto|closed-form)"},
        {"exponent", "power-law fit of correlator rows against theta(S) (correlator modes)"},
        {"validate", "run the validation suite and write a JSON report"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
        if (!o.out.empty()) cfg.output.path = o.out;
        if (!o.format.empty()) cfg.output.format = o.format;

        if (cmd == "validate") {
            const auto report = cmd_validate(cfg);
            if (cfg.output.path.empty()) {
                write_report(report, cfg, out);
            } else {
                std::ofstream f(cfg.output.path);
                if (!f) throw std::runtime_error("cannot open output file " + cfg.output.path);
                write_report(report, cfg, f);
            }
            for (const auto& c : report.checks) {
                err << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured
                    << " tolerance=" << c.tolerance << "\n";
            }
            return report.all_pass() ? 0 : 3;
        }

        Table t;
        if (cmd == "density") {
            t = cmd_density(cfg);
        } else if (cmd == "spectrum") {
            t = cmd_spectrum(cfg);
        } else if (cmd == "green") {
            t = cmd_green(cfg, o.mode.empty() ? "trapped-spectral" : o.mode, o.threads);
        } else if (cmd == "correlator") {
            t = cmd_correlator(cfg, o.mode.empty() ? "asymptotic-auto" : o.mode, o.threads);
        } else {
            t = cmd_exponent(cfg, o.mode.empty() ? "series" : o.mode, o.threads);
        }
        emit(t, cfg, out);
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bosecorr::cli
