#include "experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "error.hpp"
#include "front_analysis.hpp"
#include "real_noise.hpp"
#include "wave_theory.hpp"

namespace kpp {

namespace pt = boost::property_tree;
using json = nlohmann::ordered_json;

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"env-stats", "speed",        "front",    "critical-front",
                                                "stability", "nonexistence", "realnoise", "cocycle"};
    return names;
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out;
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    fail(ErrorKind::Config, where + ": " + what);
}

double parse_double(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        config_error(where, "expected a number, got '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) config_error(where, "expected a finite number, got '" + s + "'");
    return v;
}

long long parse_integer(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        config_error(where, "expected an integer, got '" + s + "'");
    }
    if (used != s.size()) config_error(where, "expected an integer, got '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(parse_double(item, where));
    }
    if (out.empty()) config_error(where, "expected a comma-separated list of numbers");
    return out;
}

/// Reads keys on demand and remembers which were consumed, so leftovers can
/// be reported as unknown.
class Reader {
public:
    explicit Reader(const pt::ptree& root) : root_(root) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) {
        const std::string path = section.empty() ? key : section + "/" + key;
        auto node = root_.get_child_optional(pt::ptree::path_type(path, '/'));
        if (!node) return std::nullopt;
        used_.insert(path);
        std::string v = node->data();
        v.erase(0, v.find_first_not_of(" \t"));
        v.erase(v.find_last_not_of(" \t") + 1);
        return v;
    }
    bool has(const std::string& section, const std::string& key) const {
        const std::string path = section.empty() ? key : section + "/" + key;
        return static_cast<bool>(root_.get_child_optional(pt::ptree::path_type(path, '/')));
    }
    void get(const std::string& section, const std::string& key, double& out) {
        if (auto v = raw(section, key)) out = parse_double(*v, where(section, key));
    }
    void get(const std::string& section, const std::string& key, int& out) {
        if (auto v = raw(section, key)) out = static_cast<int>(parse_integer(*v, where(section, key)));
    }
    void get(const std::string& section, const std::string& key, std::uint64_t& out) {
        if (auto v = raw(section, key)) {
            const long long n = parse_integer(*v, where(section, key));
            if (n < 0) config_error(where(section, key), "must be non-negative");
            out = static_cast<std::uint64_t>(n);
        }
    }
    void get(const std::string& section, const std::string& key, std::string& out) {
        if (auto v = raw(section, key)) out = *v;
    }
    void get(const std::string& section, const std::string& key, std::vector<double>& out) {
        if (auto v = raw(section, key)) out = parse_list(*v, where(section, key));
    }

    void reject_unknown() const {
        static const std::set<std::string> sections{"environment", "grid", "frame_grid", "solver", "run", "analysis"};
        for (const auto& [name, node] : root_) {
            if (node.empty()) {
                if (!used_.count(name)) config_error(name, "unknown top-level key");
                continue;
            }
            if (!sections.count(name)) config_error(name, "unknown section");
            for (const auto& [key, leaf] : node)
                if (!used_.count(name + "/" + key)) config_error(name + "." + key, "unknown key");
        }
    }

    static std::string where(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

private:
    const pt::ptree& root_;
    std::set<std::string> used_;
};

RunConfig defaults_for(const std::string& scenario) {
    RunConfig c;
    c.scenario = scenario;
    if (scenario == "env-stats") {
        c.run.t_end = 200.0;
    } else if (scenario == "front") {
        c.frame_grid = {-40.0, 60.0, 0.05};
        c.solver.dt = 0.005;
        c.solver.advection = AdvectionScheme::Centered;
        c.run.t_end = 0.0;
    } else if (scenario == "critical-front" || scenario == "nonexistence") {
        c.grid.x_max = std::numeric_limits<double>::quiet_NaN();
    } else if (scenario == "stability") {
        c.run.t_end = 80.0;
        c.run.sample_dt = 1.0;
    } else if (scenario == "realnoise") {
        c.environment = BoundedNoiseEnv{};
        c.run.t_end = 500.0;
    } else if (scenario == "cocycle") {
        c.run.t_end = 200.0;
    }
    return c;
}

std::string advection_name(AdvectionScheme a) { return a == AdvectionScheme::Centered ? "centered" : "upwind"; }

std::string reaction_name(ReactionTreatment r) {
    switch (r) {
        case ReactionTreatment::Explicit: return "explicit";
        case ReactionTreatment::SemiImplicit: return "semi-implicit";
        case ReactionTreatment::Exact: return "exact";
    }
    return "exact";
}

EnvironmentSpec read_environment(Reader& r, const EnvironmentSpec& fallback, double& dt_env) {
    std::string kind = kind_name(fallback);
    r.get("environment", "kind", kind);
    r.get("environment", "dt", dt_env);
    const std::string where = "environment.kind";
    if (kind == "constant") {
        ConstantEnv e;
        if (auto* f = std::get_if<ConstantEnv>(&fallback)) e = *f;
        r.get("environment", "a", e.a);
        return e;
    }
    if (kind == "periodic") {
        PeriodicEnv e;
        r.get("environment", "mean", e.mean);
        r.get("environment", "amplitude", e.amplitude);
        r.get("environment", "period", e.period);
        r.get("environment", "phase", e.phase);
        return e;
    }
    if (kind == "h2") {
        PiecewiseH2Env e;
        r.get("environment", "n_max", e.n_max);
        std::string profile = "tent";
        r.get("environment", "profile", profile);
        if (profile == "tent") e.profile = SpikeProfile::TentLinear;
        else if (profile == "smooth") e.profile = SpikeProfile::SmoothBump;
        else config_error("environment.profile", "expected tent or smooth, got '" + profile + "'");
        return e;
    }
    if (kind == "bounded_noise") {
        BoundedNoiseEnv e;
        r.get("environment", "relaxation_time", e.relaxation_time);
        r.get("environment", "volatility", e.volatility);
        r.get("environment", "bound", e.bound);
        r.get("environment", "seed", e.seed);
        return e;
    }
    if (kind == "tabulated") {
        TabulatedEnv e;
        r.get("environment", "times", e.times);
        r.get("environment", "values", e.values);
        if (e.times.empty() || e.values.empty()) config_error("environment", "tabulated needs times and values");
        return e;
    }
    config_error(where, "unknown environment kind '" + kind + "'");
}

void read_grid(Reader& r, const std::string& section, GridSpec& g) {
    r.get(section, "x_min", g.x_min);
    r.get(section, "x_max", g.x_max);
    r.get(section, "dx", g.dx);
}

void validate_config(const RunConfig& c) {
    auto check = [](bool ok, const std::string& where, const std::string& what) {
        if (!ok) config_error(where, what);
    };
    try {
        validate(c.environment);
    } catch (const Error& e) {
        config_error("environment", e.what());
    }
    check(c.dt_env > 0.0, "environment.dt", "must be positive");
    for (const auto* g : {&c.grid, &c.frame_grid}) {
        check(g->dx > 0.0, "grid.dx", "must be positive");
        check(std::isnan(g->x_max) || g->x_max > g->x_min + 2.0 * g->dx, "grid", "needs x_max > x_min + 2 dx");
    }
    check(c.solver.dt > 0.0, "solver.dt", "must be positive");
    check(c.run.sample_dt > 0.0, "run.sample_dt", "must be positive");
    check(c.run.mu > 0.0, "run.mu", "must be positive");
    check(c.run.pullback > 0.0, "run.pullback", "must be positive");
    check(c.run.replicas >= 1, "run.replicas", "must be at least 1");
    check(c.run.dq > 0.0, "run.dq", "must be positive");
    check(c.run.truncation >= 0.0, "run.truncation", "must be non-negative");
    check(c.run.pairs >= 1, "run.pairs", "must be at least 1");
    check(c.run.perturbation_width > 0.0, "run.perturbation_width", "must be positive");
    check(c.run.perturbation_amplitude > -1.0, "run.perturbation_amplitude", "must exceed -1");
    check(c.run.stability_pullback > 0.0, "run.stability_pullback", "must be positive");
    for (double f : c.run.mu_factors) check(f > 0.0 && f < 1.0, "run.mu_factors", "entries must lie in (0, 1)");
    for (double l : c.analysis.levels) check(l > 0.0 && l < 1.0, "analysis.levels", "entries must lie in (0, 1)");
    check(c.analysis.window_min > 0.0, "analysis.window_min", "must be positive");
    check(c.analysis.tail_cutoff > 0.0 && c.analysis.tail_cutoff < 1.0, "analysis.tail_cutoff", "must lie in (0, 1)");
    const bool anchored = c.scenario == "front" || c.scenario == "realnoise";
    check(anchored || c.run.t_end > c.run.t_start, "run", "needs t_end > t_start");
}

RunConfig parse_tree(const pt::ptree& root, const std::string& scenario_override) {
    Reader r(root);
    std::string scenario;
    r.get("", "scenario", scenario);
    if (!scenario_override.empty()) scenario = scenario_override;
    if (scenario.empty()) config_error("scenario", "missing");
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
        config_error("scenario", "unknown scenario '" + scenario + "'");

    RunConfig c = defaults_for(scenario);
    r.get("", "seed", c.seed);
    r.get("", "output_dir", c.output_dir);
    c.environment = read_environment(r, c.environment, c.dt_env);
    read_grid(r, "grid", c.grid);
    read_grid(r, "frame_grid", c.frame_grid);

    r.get("solver", "dt", c.solver.dt);
    if (auto v = r.raw("solver", "advection")) {
        if (*v == "upwind") c.solver.advection = AdvectionScheme::Upwind;
        else if (*v == "centered") c.solver.advection = AdvectionScheme::Centered;
        else config_error("solver.advection", "expected upwind or centered, got '" + *v + "'");
    }
    if (auto v = r.raw("solver", "reaction")) {
        if (*v == "explicit") c.solver.reaction = ReactionTreatment::Explicit;
        else if (*v == "semi-implicit") c.solver.reaction = ReactionTreatment::SemiImplicit;
        else if (*v == "exact") c.solver.reaction = ReactionTreatment::Exact;
        else config_error("solver.reaction", "expected explicit, semi-implicit or exact, got '" + *v + "'");
    }

    RunParams& p = c.run;
    r.get("run", "t_start", p.t_start);
    r.get("run", "t_end", p.t_end);
    r.get("run", "h2_horizon", p.h2_horizon);
    r.get("run", "mu", p.mu);
    r.get("run", "pullback", p.pullback);
    r.get("run", "sample_dt", p.sample_dt);
    r.get("run", "mu_factors", p.mu_factors);
    r.get("run", "replicas", p.replicas);
    r.get("run", "truncation", p.truncation);
    r.get("run", "dq", p.dq);
    r.get("run", "perturbation_amplitude", p.perturbation_amplitude);
    r.get("run", "perturbation_width", p.perturbation_width);
    r.get("run", "stability_pullback", p.stability_pullback);
    r.get("run", "pairs", p.pairs);
    if (p.h2_horizon >= 0) {
        if (p.h2_horizon > 200) config_error("run.h2_horizon", "must be at most 200");
        p.t_start = 0.0;
        p.t_end = h2_interval(p.h2_horizon).l;
    }

    AnalysisParams& a = c.analysis;
    r.get("analysis", "levels", a.levels);
    r.get("analysis", "window_min", a.window_min);
    r.get("analysis", "burn_in", a.burn_in);
    r.get("analysis", "tail_cutoff", a.tail_cutoff);
    r.reject_unknown();
    validate_config(c);
    return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& scenario_override) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const std::exception& e) {
            config_error("manifest", std::string("invalid JSON: ") + e.what());
        }
        if (!j.contains("config_ini") || !j["config_ini"].is_string())
            config_error("manifest", "missing config_ini entry");
        return parse_config_text(j["config_ini"].get<std::string>(), scenario_override);
    }
    pt::ptree root;
    std::istringstream in(text);
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        config_error("config", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    return parse_tree(root, scenario_override);
}

RunConfig load_config(const std::string& path, const std::string& scenario_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), scenario_override);
}

std::string render_config(const RunConfig& c) {
    std::ostringstream o;
    o << "scenario = " << c.scenario << "\n";
    o << "seed = " << c.seed << "\n";
    o << "output_dir = " << c.output_dir << "\n\n";
    o << "[environment]\nkind = " << kind_name(c.environment) << "\ndt = " << format_double(c.dt_env) << "\n";
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, ConstantEnv>) {
                o << "a = " << format_double(e.a) << "\n";
            } else if constexpr (std::is_same_v<T, PeriodicEnv>) {
                o << "mean = " << format_double(e.mean) << "\namplitude = " << format_double(e.amplitude)
                  << "\nperiod = " << format_double(e.period) << "\nphase = " << format_double(e.phase) << "\n";
            } else if constexpr (std::is_same_v<T, PiecewiseH2Env>) {
                o << "n_max = " << e.n_max
                  << "\nprofile = " << (e.profile == SpikeProfile::TentLinear ? "tent" : "smooth") << "\n";
            } else if constexpr (std::is_same_v<T, BoundedNoiseEnv>) {
                o << "relaxation_time = " << format_double(e.relaxation_time)
                  << "\nvolatility = " << format_double(e.volatility) << "\nbound = " << format_double(e.bound)
                  << "\nseed = " << e.seed << "\n";
            } else {
                o << "times = " << join(e.times) << "\nvalues = " << join(e.values) << "\n";
            }
        },
        c.environment);
    auto grid = [&](const char* name, const GridSpec& g) {
        o << "\n[" << name << "]\nx_min = " << format_double(g.x_min) << "\n";
        if (!std::isnan(g.x_max)) o << "x_max = " << format_double(g.x_max) << "\n";
        o << "dx = " << format_double(g.dx) << "\n";
    };
    grid("grid", c.grid);
    grid("frame_grid", c.frame_grid);
    o << "\n[solver]\ndt = " << format_double(c.solver.dt) << "\nadvection = " << advection_name(c.solver.advection)
      << "\nreaction = " << reaction_name(c.solver.reaction) << "\n";
    const RunParams& p = c.run;
    o << "\n[run]\nt_start = " << format_double(p.t_start) << "\nt_end = " << format_double(p.t_end)
      << "\nmu = " << format_double(p.mu) << "\npullback = " << format_double(p.pullback)
      << "\nsample_dt = " << format_double(p.sample_dt) << "\nmu_factors = " << join(p.mu_factors)
      << "\nreplicas = " << p.replicas << "\ntruncation = " << format_double(p.truncation)
      << "\ndq = " << format_double(p.dq) << "\nperturbation_amplitude = " << format_double(p.perturbation_amplitude)
      << "\nperturbation_width = " << format_double(p.perturbation_width)
      << "\nstability_pullback = " << format_double(p.stability_pullback) << "\npairs = " << p.pairs << "\n";
    const AnalysisParams& a = c.analysis;
    o << "\n[analysis]\nlevels = " << join(a.levels) << "\nwindow_min = " << format_double(a.window_min)
      << "\nburn_in = " << format_double(a.burn_in) << "\ntail_cutoff = " << format_double(a.tail_cutoff) << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::Io, "SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

unsigned worker_count() {
    const char* env = std::getenv("KPPFRONTS_WORKERS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
        warn(std::string("ignoring KPPFRONTS_WORKERS='") + env + "'");
        return 1;
    }
    return static_cast<unsigned>(std::min<long>(n, 256));
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckItem& c) { return c.pass; });
}

std::string RunReport::text(bool with_checks) const {
    std::ostringstream o;
    o << "scenario " << scenario << " (" << std::fixed;
    o.precision(2);
    o << wall_seconds << " s)\n";
    for (const auto& s : summary) o << "  " << s << "\n";
    for (const auto& f : outputs) o << "  wrote " << f.name << " sha256=" << f.sha256.substr(0, 16) << "\n";
    if (!manifest_path.empty()) o << "  manifest " << manifest_path << "\n";
    if (with_checks) {
        o.unsetf(std::ios::floatfield);
        o.precision(6);
        for (const auto& c : checks)
            o << (c.pass ? "  PASS  " : "  FAIL  ") << c.name << ": " << c.value << " (" << c.expectation << ")\n";
        o << (passed() ? "check passed\n" : "check FAILED\n");
    }
    return o.str();
}

namespace {

class Csv {
public:
    Csv(const RunConfig& cfg, std::vector<std::string> columns) : columns_(std::move(columns)) {
        body_ << "# kppfronts " << kVersion << "\n# scenario: " << cfg.scenario << "\n# seed: " << cfg.seed
              << "\n# environment: " << kind_name(cfg.environment) << "\n";
    }
    Csv& meta(const std::string& key, const std::string& value) {
        body_ << "# " << key << ": " << value << "\n";
        return *this;
    }
    Csv& meta(const std::string& key, double value) { return meta(key, format_double(value)); }
    void row(const std::vector<double>& v) {
        if (!header_written_) write_header();
        for (std::size_t i = 0; i < v.size(); ++i) body_ << (i ? "," : "") << format_double(v[i]);
        body_ << "\n";
    }
    void row(const std::string& label, const std::vector<double>& v) {
        if (!header_written_) write_header();
        body_ << label;
        for (double x : v) body_ << "," << format_double(x);
        body_ << "\n";
    }
    std::string str() {
        if (!header_written_) write_header();
        return body_.str();
    }

private:
    void write_header() {
        for (std::size_t i = 0; i < columns_.size(); ++i) body_ << (i ? "," : "") << columns_[i];
        body_ << "\n";
        header_written_ = true;
    }
    std::vector<std::string> columns_;
    std::ostringstream body_;
    bool header_written_ = false;
};

struct Context {
    const RunConfig& cfg;
    RunReport& report;
    std::filesystem::path dir;

    void write(const std::string& name, Csv& csv) {
        const std::string data = csv.str();
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
        out << data;
        out.close();
        if (!out) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
        report.outputs.push_back(OutputFile{name, sha256_hex(data), data.size()});
    }
    void check(const std::string& name, double value, bool pass, const std::string& expectation) {
        report.checks.push_back(CheckItem{name, value, expectation, pass});
    }
    void note(const std::string& line) { report.summary.push_back(line); }
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream o;
    o.precision(prec);
    o << v;
    return o.str();
}

std::string within(double target, double rel) {
    return "within " + fmt(100.0 * rel, 3) + "% of " + fmt(target);
}

bool close_rel(double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); }

CoefficientPath path_for(const RunConfig& c, double t_start, double t_end, std::uint64_t seed) {
    return sample_path(c.environment, t_start, t_end, c.dt_env, seed);
}

/// Runs count jobs on up to worker_count() threads; results keep job order.
template <class R>
std::vector<R> run_jobs(std::size_t count, const std::function<R(std::size_t)>& job) {
    std::vector<R> out(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = job(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    out[i] = job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

void speed_rows(Csv& csv, std::uint64_t seed, const FrontTrack& tr, const SpeedEstimate& s) {
    csv.row({static_cast<double>(seed), tr.level, s.average, s.least_mean, s.largest_mean, s.window_min,
             s.fit_residual});
}

const std::vector<std::string> kSpeedColumns{"seed",         "level",      "average",     "least_mean",
                                             "largest_mean", "window_min", "fit_residual"};

void add_track_rows(Csv& csv, const FrontTrack& tr, double extra = std::numeric_limits<double>::quiet_NaN()) {
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (std::isnan(extra)) csv.row({tr.level, tr.times[i], tr.positions[i]});
        else csv.row({extra, tr.level, tr.times[i], tr.positions[i]});
    }
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

void scenario_env_stats(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const std::size_t R = static_cast<std::size_t>(c.run.replicas);
    struct Result {
        CoefficientPath path;
        MeanBounds mb;
    };
    auto results = run_jobs<Result>(R, [&](std::size_t r) {
        CoefficientPath p = path_for(c, c.run.t_start, c.run.t_end, c.seed + r);
        MeanBounds mb = estimate_mean_bounds(p, c.analysis.window_min);
        return Result{std::move(p), mb};
    });
    Csv bounds(c, {"seed", "a_lower", "a_upper", "a_hat", "window_min"});
    for (std::size_t r = 0; r < R; ++r) {
        const MeanBounds& mb = results[r].mb;
        bounds.row({static_cast<double>(c.seed + r), mb.a_lower, mb.a_upper, mb.a_hat, mb.window_min});
    }
    ctx.write("mean_bounds.csv", bounds);
    Csv path(c, {"t", "a"});
    const CoefficientPath& p0 = results.front().path;
    for (std::size_t i = 0; i < p0.size(); ++i) path.row({p0.time(i), p0[i]});
    ctx.write("path.csv", path);

    for (std::size_t r = 0; r < R; ++r) {
        const MeanBounds& mb = results[r].mb;
        const std::string tag = R > 1 ? " [seed " + std::to_string(c.seed + r) + "]" : "";
        ctx.note("a_lower = " + fmt(mb.a_lower) + ", a_upper = " + fmt(mb.a_upper) + ", a_hat = " + fmt(mb.a_hat) +
                 tag);
        ctx.check("ordering a_lower <= a_hat <= a_upper" + tag, mb.a_hat,
                  mb.a_lower <= mb.a_hat + 1e-12 && mb.a_hat <= mb.a_upper + 1e-12, "between a_lower and a_upper");
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, ConstantEnv>) {
                    const bool ok = std::abs(mb.a_lower - e.a) <= 1e-12 * e.a &&
                                    std::abs(mb.a_upper - e.a) <= 1e-12 * e.a &&
                                    std::abs(mb.a_hat - e.a) <= 1e-12 * e.a;
                    ctx.check("constant bounds" + tag, mb.a_hat, ok, "all equal " + fmt(e.a));
                } else if constexpr (std::is_same_v<T, PiecewiseH2Env>) {
                    ctx.check("a_lower" + tag, mb.a_lower, mb.a_lower >= 0.9 && mb.a_lower <= 1.1, "in [0.9, 1.1]");
                    ctx.check("a_upper" + tag, mb.a_upper, mb.a_upper >= 1.9 && mb.a_upper <= 2.1, "in [1.9, 2.1]");
                    ctx.check("a_hat" + tag, mb.a_hat, mb.a_hat >= 1.4 && mb.a_hat <= 1.6, "in [1.4, 1.6]");
                } else if constexpr (std::is_same_v<T, PeriodicEnv>) {
                    ctx.check("a_hat" + tag, mb.a_hat, close_rel(mb.a_hat, e.mean, 0.02), within(e.mean, 0.02));
                } else if constexpr (std::is_same_v<T, BoundedNoiseEnv>) {
                    ctx.check("a_lower" + tag, mb.a_lower, mb.a_lower >= 1.0 - e.bound, ">= 1 - bound");
                    ctx.check("a_upper" + tag, mb.a_upper, mb.a_upper <= 1.0 + e.bound, "<= 1 + bound");
                }
            },
            c.environment);
    }
}

void scenario_speed(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const std::size_t R = static_cast<std::size_t>(c.run.replicas);
    const double horizon = c.run.t_end - c.run.t_start;
    const double burn = c.burn_in(horizon);
    struct Result {
        TrackedRun run;
        std::vector<SpeedEstimate> speeds;
        MeanBounds mb;
    };
    auto results = run_jobs<Result>(R, [&](std::size_t r) {
        const CoefficientPath path = path_for(c, c.run.t_start, c.run.t_end, c.seed + r);
        const Grid1D grid = c.grid.grid();
        const Field u0 = Field::from_function(grid, c.run.t_start, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
        Result res{tracked_run(u0, path, std::nullopt, BoundaryCondition::front_like(), c.solver, c.run.t_end,
                               c.analysis.levels, c.run.sample_dt, front_exit_margin(grid)),
                   {},
                   estimate_mean_bounds(path, std::min(c.analysis.window_min, 0.5 * horizon))};
        for (const FrontTrack& tr : res.run.tracks) res.speeds.push_back(speed_estimate(tr, c.analysis.window_min, burn));
        return res;
    });

    Csv summary(c, kSpeedColumns);
    summary.meta("burn_in", burn);
    Csv tracks(c, {"seed", "level", "t", "x"});
    Csv spread(c, {"seed", "c_inf", "c_sup"});
    for (std::size_t r = 0; r < R; ++r) {
        const Result& res = results[r];
        const std::uint64_t seed = c.seed + r;
        for (std::size_t k = 0; k < res.run.tracks.size(); ++k) {
            speed_rows(summary, seed, res.run.tracks[k], res.speeds[k]);
            add_track_rows(tracks, res.run.tracks[k], static_cast<double>(seed));
        }
        const SpreadingInterval si = spreading_interval(std::span<const FrontTrack>(res.run.tracks),
                                                        c.analysis.window_min, burn);
        spread.row({static_cast<double>(seed), si.c_inf, si.c_sup});

        const std::string tag = R > 1 ? " [seed " + std::to_string(seed) + "]" : "";
        const double target = 2.0 * std::sqrt(res.mb.a_hat);
        for (std::size_t k = 0; k < res.speeds.size(); ++k) {
            const SpeedEstimate& s = res.speeds[k];
            const std::string lv = " level " + fmt(res.run.tracks[k].level);
            ctx.note("average speed" + lv + " = " + fmt(s.average) + ", least mean = " + fmt(s.least_mean) +
                     ", largest mean = " + fmt(s.largest_mean) + tag);
            ctx.check("average speed" + lv + tag, s.average, close_rel(s.average, target, 0.05),
                      within(target, 0.05) + " (2 sqrt(a_hat))");
            const double slack = 3.0 * s.fit_residual / std::max(1.0, horizon - burn) + 1e-9;
            ctx.check("least <= average <= largest" + lv + tag, s.average,
                      s.least_mean <= s.average + slack && s.average <= s.largest_mean + slack,
                      "ordered within fit residual");
        }
    }
    ctx.write("speed_summary.csv", summary);
    ctx.write("track.csv", tracks);
    ctx.write("spreading.csv", spread);
}

WaveParams sub_params_or_note(Context& ctx, double mu, const CoefficientPath& path, const BoundedPrimitive& A,
                              double a_lower, bool& ok) {
    ok = false;
    if (!(mu < std::sqrt(a_lower)) || !A.ok) {
        ctx.note("sub-solution skipped: " + (A.ok ? std::string("mu >= sqrt(a_lower)") : A.failure));
        return {};
    }
    try {
        WaveParams p = calibrate_sub_solution(mu, path, A, a_lower);
        ok = true;
        ctx.note("sub-solution mu_tilde = " + fmt(p.mu_tilde) + ", d = " + fmt(p.d));
        return p;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Analysis) throw;
        ctx.note(std::string("sub-solution calibration failed: ") + e.what());
        return {};
    }
}

void scenario_front(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const double mu = c.run.mu;
    const double T = c.run.pullback;
    const double t0 = c.run.t_end;
    const double window_p = 1.0;
    const CoefficientPath path = path_for(c, t0 - T, t0, c.seed);
    const CoefficientPath extended = path_for(c, t0 - T, t0 + window_p, c.seed);
    const Grid1D grid = c.frame_grid.grid();

    const WaveProfile U = pullback_profile(mu, path, t0, T, grid, c.solver);
    const MeanBounds mb = estimate_mean_bounds(path, std::min(c.analysis.window_min, 0.5 * T));
    const double a_lower = mb.a_lower;

    const BoundaryCondition bc{BoundarySide::dirichlet(1.0), BoundarySide::exponential_tail(mu)};
    const TrackedRun run = tracked_run(super_field(mu, grid, t0 - T), path, mu, bc, c.solver, t0, c.analysis.levels,
                                       c.run.sample_dt, 2.0 * grid.dx());
    const double burn = c.burn_in(T);
    const SpeedIntegral C = wave_speed_integral(mu, path, a_lower);
    const SpeedEstimate reference = speed_estimate(speed_track(C), c.analysis.window_min, burn);

    const BoundedPrimitive A = build_bounded_primitive(extended, window_p, 0.05, a_lower);
    bool have_sub = false;
    const WaveParams params = sub_params_or_note(ctx, mu, extended, A, a_lower, have_sub);

    Csv prof(c, {"x", "U", "U_over_exp", "sub", "super"});
    prof.meta("mu", mu).meta("anchor_time", t0).meta("pullback", T).meta("convergence", U.convergence_estimate);
    double sub_excess = -std::numeric_limits<double>::infinity();
    double super_excess = -std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        const double sub = have_sub ? sub_profile(params, A, t0, x) : std::numeric_limits<double>::quiet_NaN();
        const double sup = super_profile(mu, x);
        prof.row({x, U.values[i], U.values[i] / std::exp(-mu * x), sub, sup});
        if (have_sub) sub_excess = std::max(sub_excess, sub - U.values[i]);
        super_excess = std::max(super_excess, U.values[i] - sup);
        if (i > 0 && !(U.values[i] < U.values[i - 1])) decreasing = false;
    }
    ctx.write("profile.csv", prof);

    Csv summary(c, kSpeedColumns);
    summary.meta("mu", mu).meta("burn_in", burn).meta("reference_average", reference.average);
    Csv tracks(c, {"level", "t", "x"});
    for (const FrontTrack& tr : run.tracks) {
        const SpeedEstimate s = speed_estimate(tr, c.analysis.window_min, burn);
        speed_rows(summary, c.seed, tr, s);
        add_track_rows(tracks, tr);
        ctx.note("front speed level " + fmt(tr.level) + ": average " + fmt(s.average) + ", least mean " +
                 fmt(s.least_mean) + " (C(t) slope " + fmt(reference.average) + ")");
        ctx.check("average speed level " + fmt(tr.level), s.average, close_rel(s.average, reference.average, 0.02),
                  within(reference.average, 0.02) + " ((mu^2 + a)/mu slope)");
    }
    ctx.write("speed_summary.csv", summary);
    ctx.write("track.csv", tracks);

    ctx.note("pullback convergence " + fmt(U.convergence_estimate) + ", tail deviation " + fmt(U.tail_deviation()));
    ctx.check("pullback convergence", U.convergence_estimate, U.convergence_estimate <= 1e-3, "<= 1e-3");
    ctx.check("non-increasing in T", U.monotone_in_T ? 1.0 : 0.0, U.monotone_in_T, "U_T <= U_{T/2}");
    ctx.check("tail ratio", U.tail_deviation(), U.tail_deviation() <= 0.02, "<= 0.02 on the right quarter");
    ctx.check("strictly decreasing", decreasing ? 1.0 : 0.0, decreasing, "profile decreasing in x");
    ctx.check("below super-solution", super_excess, super_excess <= 1e-9, "U - super <= 1e-9");
    if (have_sub) ctx.check("above sub-solution", sub_excess, sub_excess <= 1e-6, "sub - U <= 1e-6");
}

Grid1D critical_grid(const RunConfig& c, const CoefficientPath& path, double T) {
    GridSpec g = c.grid;
    if (std::isnan(g.x_max)) {
        const double w = std::min(10.0, 0.5 * path.duration());
        const double a_up = estimate_mean_bounds(path, w).a_upper;
        g.x_max = g.x_min + 40.0 + 1.1 * 2.0 * std::sqrt(a_up) * T + 20.0;
    }
    return g.grid();
}

void scenario_critical(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const double T = c.run.t_end - c.run.t_start;
    const CoefficientPath path = path_for(c, c.run.t_start, c.run.t_end, c.seed);
    const Grid1D grid = critical_grid(c, path, T);
    const CriticalFront cf = critical_front_profile(path, c.run.t_end, T, grid, c.solver, c.run.sample_dt);
    const double burn = c.burn_in(T);
    const SpeedEstimate s = speed_estimate(cf.track, c.analysis.window_min, burn);
    const MeanBounds mb = estimate_mean_bounds(path, c.analysis.window_min);

    Csv prof(c, {"x", "U"});
    prof.meta("anchor_time", c.run.t_end).meta("T", T);
    for (std::size_t i = 0; i < cf.profile.grid.nx; ++i) prof.row({cf.profile.grid.x(i), cf.profile.values[i]});
    ctx.write("profile.csv", prof);
    Csv tracks(c, {"level", "t", "x"});
    add_track_rows(tracks, cf.track);
    ctx.write("track.csv", tracks);
    Csv summary(c, kSpeedColumns);
    summary.meta("burn_in", burn).meta("a_lower", mb.a_lower).meta("a_hat", mb.a_hat);
    speed_rows(summary, c.seed, cf.track, s);
    ctx.write("speed_summary.csv", summary);

    const auto& g = cf.profile.grid;
    const double dx = g.dx();
    const auto centre = static_cast<std::size_t>(std::llround(-g.x_min / dx));
    const double lo = 2.0 * std::sqrt(mb.a_hat);
    const double hi = (mb.a_lower + mb.a_hat) / std::sqrt(mb.a_lower);
    const double floor = 2.0 * std::sqrt(mb.a_lower);
    ctx.note("critical front average speed " + fmt(s.average) + ", least mean " + fmt(s.least_mean) +
             "; bracket [" + fmt(lo) + ", " + fmt(hi) + "]");
    ctx.check("value at x = 0", cf.profile.values[centre], std::abs(cf.profile.values[centre] - 0.5) <= 1e-9,
              "1/2");
    ctx.check("left limit", cf.profile.values.front(), cf.profile.values.front() >= 0.98, ">= 0.98");
    ctx.check("right limit", cf.profile.values.back(), cf.profile.values.back() <= 0.02, "<= 0.02");
    ctx.check("average speed bracket", s.average, s.average >= 0.95 * lo && s.average <= 1.05 * hi,
              "in [" + fmt(0.95 * lo) + ", " + fmt(1.05 * hi) + "]");
    ctx.check("least mean speed", s.least_mean, s.least_mean >= 0.95 * floor, ">= " + fmt(0.95 * floor));
}

void scenario_stability(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    StabilityOptions opt;
    opt.mu = c.run.mu;
    opt.t0 = c.run.t_start;
    opt.T_pull = c.run.stability_pullback;
    opt.T = c.run.t_end - c.run.t_start;
    opt.amplitude = c.run.perturbation_amplitude;
    opt.width = c.run.perturbation_width;
    opt.sample_dt = c.run.sample_dt;
    opt.tail_cutoff = c.analysis.tail_cutoff;
    const CoefficientPath path = path_for(c, opt.t0 - opt.T_pull, c.run.t_end, c.seed);
    const StabilityMetric m = run_stability(path, c.frame_grid.grid(), c.solver, opt);

    Csv out(c, {"t", "alpha"});
    out.meta("mu", opt.mu).meta("tail_cutoff", opt.tail_cutoff);
    double worst_increase = 0.0;
    for (std::size_t i = 0; i < m.times.size(); ++i) {
        out.row({m.times[i], m.alpha_values[i]});
        if (i > 0) worst_increase = std::max(worst_increase, m.alpha_values[i] - m.alpha_values[i - 1]);
    }
    ctx.write("alpha.csv", out);
    const double final_excess = m.alpha_values.back() - 1.0;
    ctx.note("alpha(0) = " + fmt(m.alpha_values.front()) + ", alpha(T) = " + fmt(m.alpha_values.back()));
    ctx.check("alpha non-increasing", worst_increase, worst_increase <= 1e-6, "largest increase <= 1e-6");
    ctx.check("alpha(T) - 1", final_excess, final_excess <= 0.05, "<= 0.05");
}

void scenario_nonexistence(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const double T = c.run.t_end - c.run.t_start;
    const double burn = c.burn_in(T);
    const CoefficientPath path = path_for(c, c.run.t_start, c.run.t_end, c.seed);
    const MeanBounds mb = estimate_mean_bounds(path, c.analysis.window_min);
    const double floor = 2.0 * std::sqrt(mb.a_lower);
    const Grid1D frame = c.frame_grid.grid();

    auto speeds = run_jobs<SpeedEstimate>(c.run.mu_factors.size() + 1, [&](std::size_t k) {
        if (k == c.run.mu_factors.size()) {
            const CriticalFront cf =
                critical_front_profile(path, c.run.t_end, T, critical_grid(c, path, T), c.solver, c.run.sample_dt);
            return speed_estimate(cf.track, c.analysis.window_min, burn);
        }
        const double mu = c.run.mu_factors[k] * std::sqrt(mb.a_lower);
        const BoundaryCondition bc{BoundarySide::dirichlet(1.0), BoundarySide::exponential_tail(mu)};
        const double levels[] = {0.5};
        const TrackedRun run = tracked_run(super_field(mu, frame, c.run.t_start), path, mu, bc, c.solver, c.run.t_end,
                                           levels, c.run.sample_dt, 2.0 * frame.dx());
        return speed_estimate(run.tracks.front(), c.analysis.window_min, burn);
    });

    Csv out(c, {"front", "mu", "average", "least_mean", "largest_mean", "threshold"});
    out.meta("a_lower", mb.a_lower).meta("a_hat", mb.a_hat).meta("window_min", c.analysis.window_min);
    for (std::size_t k = 0; k < speeds.size(); ++k) {
        const bool critical = k == c.run.mu_factors.size();
        const double mu = critical ? 0.0 : c.run.mu_factors[k] * std::sqrt(mb.a_lower);
        const SpeedEstimate& s = speeds[k];
        const std::string label = critical ? "critical" : "mu=" + fmt(mu, 4);
        out.row(critical ? "critical" : "pullback", {mu, s.average, s.least_mean, s.largest_mean, floor});
        ctx.note(label + ": least mean " + fmt(s.least_mean) + ", average " + fmt(s.average));
        ctx.check("least mean " + label, s.least_mean, s.least_mean >= 0.95 * floor,
                  ">= " + fmt(0.95 * floor) + " (2 sqrt(a_lower) - 5%)");
        if (critical) {
            const double lo = 2.0 * std::sqrt(mb.a_hat);
            const double hi = (mb.a_lower + mb.a_hat) / std::sqrt(mb.a_lower);
            ctx.check("critical average bracket", s.average, s.average >= 0.95 * lo && s.average <= 1.05 * hi,
                      "in [" + fmt(0.95 * lo) + ", " + fmt(1.05 * hi) + "]");
        }
    }
    ctx.write("nonexistence.csv", out);
}

void scenario_realnoise(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    double xi_inf = 0.0;
    if (const auto* e = std::get_if<BoundedNoiseEnv>(&c.environment)) {
        xi_inf = -e->bound;
    } else {
        xi_inf = path_for(c, c.run.t_start, c.run.t_end, c.seed).min() - 1.0;
    }
    const double T_trunc = c.run.truncation > 0.0 ? c.run.truncation : default_truncation(xi_inf);
    // Whole steps before t_start, so noise nodes coincide with the Y grid; a
    // kink inside a trapezoid cell would dominate the ODE residual.
    const double lead = c.run.pullback + T_trunc + 1.0;
    const double t_first = c.run.t_start - c.dt_env * std::ceil(lead / c.dt_env);
    const CoefficientPath a = path_for(c, t_first, c.run.t_end, c.seed);
    const NoisePath xi = noise_from_coefficient(a);

    const double horizon = c.run.t_end - c.run.t_start;
    const auto n = static_cast<std::size_t>(std::llround(horizon / c.dt_env)) + 1;
    const EquilibriumPath Y = equilibrium_path(xi, c.run.t_start, c.dt_env, n, T_trunc, c.run.dq);
    const double residual = equilibrium_ode_residual(Y, xi);
    const double mean_Y = Y.Y.integral(Y.Y.t_start(), Y.Y.t_end()) / Y.Y.duration();
    double xi_lo = std::numeric_limits<double>::infinity();
    double xi_hi = -xi_lo;
    Csv eq(c, {"t", "xi", "Y"});
    eq.meta("truncation", T_trunc).meta("dq", c.run.dq);
    for (std::size_t i = 0; i < Y.Y.size(); ++i) {
        const double t = Y.Y.time(i);
        const double x = xi(t);
        xi_lo = std::min(xi_lo, x);
        xi_hi = std::max(xi_hi, x);
        eq.row({t, x, Y.Y[i]});
    }
    ctx.write("equilibrium.csv", eq);

    const Grid1D grid = c.frame_grid.grid();
    const WaveProfile U = real_noise_front(c.run.mu, xi, c.run.t_end, c.run.pullback, grid, c.solver, T_trunc, c.run.dq);
    const double y0 = Y.Y[Y.Y.size() - 1];
    Csv prof(c, {"x", "U", "U_over_Y"});
    prof.meta("mu", c.run.mu).meta("anchor_time", c.run.t_end).meta("Y_anchor", y0);
    for (std::size_t i = 0; i < grid.nx; ++i) prof.row({grid.x(i), U.values[i], U.values[i] / y0});
    ctx.write("profile.csv", prof);

    ctx.note("Y in [" + fmt(Y.Y.min()) + ", " + fmt(Y.Y.max()) + "], time average " + fmt(mean_Y) +
             ", ODE residual " + fmt(residual) + ", truncation " + fmt(T_trunc));
    ctx.check("ODE residual", residual, residual <= 1e-3, "<= 1e-3");
    ctx.check("time average of Y", mean_Y, close_rel(mean_Y, 1.0, 0.05), within(1.0, 0.05));
    ctx.check("Y bounds", Y.Y.min(), Y.Y.min() >= 1.0 + xi_lo - 0.01 && Y.Y.max() <= 1.0 + xi_hi + 0.01,
              "within [1 + inf xi, 1 + sup xi] +- 0.01");
    ctx.check("front left limit / Y", U.values.front() / y0, std::abs(U.values.front() / y0 - 1.0) <= 0.02,
              "within 0.02 of 1");
    ctx.check("front right limit", U.values.back(), U.values.back() <= 0.02 * y0, "<= 0.02 Y");
}

void scenario_cocycle(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const CoefficientPath path = path_for(c, c.run.t_start, c.run.t_end, c.seed);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double D = path.duration();
    Csv out(c, {"s", "t", "residual"});
    out.meta("mu", c.run.mu);
    double worst = 0.0;
    for (int k = 0; k < c.run.pairs; ++k) {
        const double t = D * unit(rng);
        const double s = (D - t) * unit(rng);
        const double r = cocycle_residual(path, c.run.mu, s, t);
        worst = std::max(worst, std::abs(r));
        out.row({s, t, r});
    }
    ctx.write("cocycle.csv", out);
    ctx.note("largest cocycle residual " + fmt(worst) + " over " + std::to_string(c.run.pairs) + " pairs");
    ctx.check("cocycle residual", worst, worst <= 1e-8, "<= 1e-8");
}

json config_json(const RunConfig& c) {
    pt::ptree tree;
    std::istringstream in(render_config(c));
    pt::read_ini(in, tree);
    json j = json::object();
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            j[name] = node.data();
            continue;
        }
        json section = json::object();
        for (const auto& [key, leaf] : node) section[key] = leaf.data();
        j[name] = section;
    }
    return j;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.scenario = cfg.scenario;
    std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    Context ctx{cfg, report, dir};

    static const std::map<std::string, void (*)(Context&)> table{
        {"env-stats", scenario_env_stats},  {"speed", scenario_speed},
        {"front", scenario_front},          {"critical-front", scenario_critical},
        {"stability", scenario_stability},  {"nonexistence", scenario_nonexistence},
        {"realnoise", scenario_realnoise},  {"cocycle", scenario_cocycle},
    };
    const auto it = table.find(cfg.scenario);
    if (it == table.end()) fail(ErrorKind::Config, "unknown scenario '" + cfg.scenario + "'");
    it->second(ctx);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["artifact"] = "kppfronts";
    manifest["version"] = kVersion;
    manifest["scenario"] = cfg.scenario;
    manifest["seed"] = cfg.seed;
    manifest["config"] = config_json(cfg);
    manifest["config_ini"] = render_config(cfg);
    manifest["wall_clock_seconds"] = report.wall_seconds;
    manifest["outputs"] = json::array();
    for (const auto& f : report.outputs)
        manifest["outputs"].push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    manifest["checks"] = json::array();
    for (const auto& c : report.checks)
        manifest["checks"].push_back(
            {{"name", c.name}, {"value", c.value}, {"expectation", c.expectation}, {"pass", c.pass}});
    const auto mpath = dir / "manifest.json";
    std::ofstream out(mpath, std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write '" + mpath.string() + "'");
    out << manifest.dump(2) << "\n";
    report.manifest_path = mpath.string();
    return report;
}

}  // namespace kpp
