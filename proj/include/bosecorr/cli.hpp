#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bosecorr/green.hpp"
#include "bosecorr/model.hpp"

namespace bosecorr::cli {

/// Evaluation points. Green and correlator rows run x1 over the x grid with
/// the second point fixed at (x2, tau2), unless sep_count > 0, in which case
/// they run over log-spaced separations centred on S.
struct GridSpec {
    double x_min = -0.9;
    double x_max = 0.9;
    long x_count = 19;
    double x2 = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    std::vector<long> matsubara;  ///< frequency indices l for per-frequency output; empty = full sum
    double S = 0.1;
    double sep_min = 1e-3;
    double sep_max = 1e-2;
    long sep_count = 0;
    long n_max = 20;  ///< spectrum rows n = 0 .. n_max - 1
};

struct TruncationSpec {
    long homog_l_max = 64;
    long homog_n_max = 2000;
    std::string homog_tail = "bernoulli";
    long l_max = 4096;
    double rel_tol = 1e-4;
    long n0 = 20;
    double min_dtau = 1e-3;
    bool enforce_gate = true;
    long fdm_n = 4000;
};

/// Tolerances of the validation suite.
struct ValidateSpec {
    double zero_mode = 1e-10;
    double ode = 1e-6;
    double fdm = 1e-3;
    double eigen = 1e-4;
    double frequency_sum = 1e-6;
    double homog = 0.02;
    double trapped_highT = 0.05;
    double trapped_lowT = 0.1;
    double n0_drift = 0.02;
    double exponent = 0.05;
    double exponent_s_over_rc = 0.1;
    double reality = 1e-9;
    double wronskian = 1e-6;
};

struct OutputSpec {
    std::string format = "csv";
    std::string path;  ///< empty = stdout
};

struct RunConfig {
    PhysicalParams params;
    RegimeThresholds thresholds;
    WindowFactors window;
    TruncationSpec truncation;
    GridSpec grid;
    ValidateSpec validate;
    OutputSpec output;
};

/// Parses the sectioned key = value format (see README). Throws ConfigError
/// naming the source, line and key on any unknown key or malformed value.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::string& path);

/// Every resolved setting as ("section.key", value), defaults included.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;  // monostate: missing value

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// 17 significant digits; non-finite values print as nan/inf (callers avoid them).
std::string format_number(double v);
void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);

Table cmd_density(const RunConfig& cfg);
Table cmd_spectrum(const RunConfig& cfg);
/// mode: homog-series | homog-asympt | trapped-spectral | trapped-series | trapped-asympt | oracle
Table cmd_green(const RunConfig& cfg, const std::string& mode, unsigned threads = 1);
/// mode: series | spectral | asymptotic-auto | closed-form
Table cmd_correlator(const RunConfig& cfg, const std::string& mode, unsigned threads = 1);
/// Fits the correlator over the separation grid and reports theta, theta(S), xi(S).
Table cmd_exponent(const RunConfig& cfg, const std::string& mode, unsigned threads = 1);

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidateReport {
    std::vector<CheckResult> checks;
    bool all_pass() const noexcept;
};

ValidateReport cmd_validate(const RunConfig& cfg);
void write_report(const ValidateReport& r, const RunConfig& cfg, std::ostream& os);

/// Exit codes: 0 success, 1 other failure, 2 configuration or usage error,
/// 3 validation failure, 4 numerical-accuracy failure.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bosecorr::cli
