#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "bosecorr/cli.hpp"
#include "bosecorr/errors.hpp"

namespace bosecorr::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// thrown by the value parsers; the caller adds source, line and key
struct BadValue {
    std::string why;
};

double to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw BadValue{"expected a number"};
    return v;
}

long to_long(std::string_view s) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw BadValue{"expected an integer"};
    return v;
}

bool to_bool(std::string_view s) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw BadValue{"expected true or false"};
}

std::string to_string_value(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<long> to_long_list(std::string_view s) {
    std::vector<long> out;
    while (!s.empty()) {
        const auto c = s.find(',');
        const auto item = trim(s.substr(0, c));
        if (item.empty()) throw BadValue{"empty list entry"};
        out.push_back(to_long(item));
        if (c == std::string_view::npos) break;
        s = s.substr(c + 1);
    }
    return out;
}

std::string show(double v) { return format_number(v); }
std::string show(long v) { return std::to_string(v); }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(const std::string& v) { return v; }
std::string show(const std::vector<long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

void parse_into(double& t, std::string_view s) { t = to_double(s); }
void parse_into(long& t, std::string_view s) { t = to_long(s); }
void parse_into(bool& t, std::string_view s) { t = to_bool(s); }
void parse_into(std::string& t, std::string_view s) { t = to_string_value(s); }
void parse_into(std::vector<long>& t, std::string_view s) { t = to_long_list(s); }

struct Binding {
    std::string key;
    std::function<void(std::string_view)> set;
    std::function<std::string()> get;
};

template <class T>
Binding binding(std::string key, T& field) {
    return {std::move(key), [&field](std::string_view s) { parse_into(field, s); },
            [&field] { return show(field); }};
}

std::vector<Binding> bindings(RunConfig& c) {
    auto& p = c.params;
    auto& t = c.truncation;
    auto& g = c.grid;
    auto& v = c.validate;
    return {
        binding("params.hbar", p.hbar),
        binding("params.m", p.m),
        binding("params.g", p.g),
        binding("params.Omega", p.Omega),
        binding("params.Lambda", p.Lambda),
        binding("params.beta", p.beta),
        binding("regime.r_lo", c.thresholds.r_lo),
        binding("regime.r_hi", c.thresholds.r_hi),
        binding("regime.much_less", c.window.much_less),
        binding("truncation.homog_l_max", t.homog_l_max),
        binding("truncation.homog_n_max", t.homog_n_max),
        binding("truncation.homog_tail", t.homog_tail),
        binding("truncation.l_max", t.l_max),
        binding("truncation.rel_tol", t.rel_tol),
        binding("truncation.n0", t.n0),
        binding("truncation.min_dtau", t.min_dtau),
        binding("truncation.enforce_gate", t.enforce_gate),
        binding("truncation.fdm_n", t.fdm_n),
        binding("grid.x_min", g.x_min),
        binding("grid.x_max", g.x_max),
        binding("grid.x_count", g.x_count),
        binding("grid.x2", g.x2),
        binding("grid.tau1", g.tau1),
        binding("grid.tau2", g.tau2),
        binding("grid.matsubara", g.matsubara),
        binding("grid.S", g.S),
        binding("grid.sep_min", g.sep_min),
        binding("grid.sep_max", g.sep_max),
        binding("grid.sep_count", g.sep_count),
        binding("grid.n_max", g.n_max),
        binding("validate.zero_mode", v.zero_mode),
        binding("validate.ode", v.ode),
        binding("validate.fdm", v.fdm),
        binding("validate.eigen", v.eigen),
        binding("validate.frequency_sum", v.frequency_sum),
        binding("validate.homog", v.homog),
        binding("validate.trapped_highT", v.trapped_highT),
        binding("validate.trapped_lowT", v.trapped_lowT),
        binding("validate.n0_drift", v.n0_drift),
        binding("validate.exponent", v.exponent),
        binding("validate.exponent_s_over_rc", v.exponent_s_over_rc),
        binding("validate.reality", v.reality),
        binding("validate.wronskian", v.wronskian),
        binding("output.format", c.output.format),
        binding("output.path", c.output.path),
    };
}

[[noreturn]] void fail(std::string_view source, std::size_t line, std::string_view key, const std::string& why) {
    std::ostringstream os;
    os << source;
    if (line > 0) os << ":" << line;
    os << ": ";
    if (!key.empty()) os << "key '" << key << "': ";
    os << why;
    throw ConfigError(os.str());
}

void check_resolved(const RunConfig& c, std::string_view source) {
    auto bad = [&](const std::string& key, const std::string& why) { fail(source, 0, key, why); };
    try {
        validate(c.params);
    } catch (const DomainError& e) {
        bad("params", e.what());
    }
    if (!(c.thresholds.r_lo > 0.0 && c.thresholds.r_lo < c.thresholds.r_hi)) {
        bad("regime.r_lo", "need 0 < r_lo < r_hi");
    }
    if (!(c.window.much_less > 0.0)) bad("regime.much_less", "must be positive");
    const auto& t = c.truncation;
    if (t.homog_l_max < 1 || t.homog_n_max < 1) bad("truncation.homog_l_max", "series cutoffs must be >= 1");
    if (t.homog_tail != "none" && t.homog_tail != "bernoulli") bad("truncation.homog_tail", "expected none or bernoulli");
    if (t.l_max < 0) bad("truncation.l_max", "must be >= 0");
    if (!(t.rel_tol > 0.0)) bad("truncation.rel_tol", "must be positive");
    if (t.n0 < 1) bad("truncation.n0", "must be >= 1");
    if (!(t.min_dtau > 0.0 && t.min_dtau < 0.5)) bad("truncation.min_dtau", "need 0 < min_dtau < 0.5");
    if (t.fdm_n < 100) bad("truncation.fdm_n", "must be >= 100");
    const auto& g = c.grid;
    if (g.x_count < 0) bad("grid.x_count", "must be >= 0");
    if (g.sep_count < 0) bad("grid.sep_count", "must be >= 0");
    if (g.sep_count > 0 && !(g.sep_min > 0.0 && g.sep_max >= g.sep_min)) {
        bad("grid.sep_min", "need 0 < sep_min <= sep_max");
    }
    if (g.n_max < 0) bad("grid.n_max", "must be >= 0");
    if (c.output.format != "csv" && c.output.format != "json") bad("output.format", "expected csv or json");
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view source) {
    RunConfig cfg;
    auto table = bindings(cfg);
    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);
        // comments: whole line, or after whitespace
        for (std::size_t i = 0; i < line.size(); ++i) {
            if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(source, line_no, "", "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) fail(source, line_no, "", "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(source, line_no, "", "expected key = value");
        const std::string name(trim(line.substr(0, eq)));
        if (name.empty()) fail(source, line_no, "", "missing key before '='");
        if (section.empty()) fail(source, line_no, name, "key outside any [section]");
        const std::string key = section + "." + name;
        auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return b.key == key; });
        if (it == table.end()) fail(source, line_no, key, "unknown key");
        if (!seen.insert(key).second) fail(source, line_no, key, "duplicate key");
        try {
            it->set(trim(line.substr(eq + 1)));
        } catch (const BadValue& e) {
            fail(source, line_no, key, e.why + ", got '" + std::string(trim(line.substr(eq + 1))) + "'");
        }
    }
    check_resolved(cfg, source);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
    RunConfig copy = cfg;
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& b : bindings(copy)) out.emplace_back(b.key, b.get());
    return out;
}

}  // namespace bosecorr::cli
