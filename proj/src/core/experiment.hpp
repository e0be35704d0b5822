#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "environment.hpp"
#include "pde_solver.hpp"

namespace kpp {

inline constexpr const char* kVersion = "0.1.0";

struct GridSpec {
    double x_min = -20.0;
    double x_max = 400.0;
    double dx = 0.1;

    Grid1D grid() const { return Grid1D::with_spacing(x_min, x_max, dx); }
};

struct RunParams {
    double t_start = 0.0;
    double t_end = 150.0;
    int h2_horizon = -1;  // when >= 0, [t_start, t_end] = [0, l_n]
    double mu = 0.5;
    double pullback = 80.0;
    double sample_dt = 0.1;
    std::vector<double> mu_factors{0.3, 0.5, 0.8};
    int replicas = 1;
    double truncation = 0.0;  // 0 picks the default from the noise bound
    double dq = 1e-3;
    double perturbation_amplitude = 0.4;
    double perturbation_width = 4.0;
    double stability_pullback = 60.0;
    int pairs = 100;
};

struct AnalysisParams {
    std::vector<double> levels{0.5};
    double window_min = 15.0;
    double burn_in = -1.0;  // negative means 20% of the horizon
    double tail_cutoff = 1e-8;
};

struct RunConfig {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string output_dir = "kppfronts-out";
    EnvironmentSpec environment = ConstantEnv{};
    double dt_env = 0.01;
    GridSpec grid;
    /// Moving-frame grid used by scenarios that also run a fixed-frame front.
    GridSpec frame_grid{-40.0, 60.0, 0.1};
    SolverConfig solver;
    RunParams run;
    AnalysisParams analysis;

    double burn_in(double horizon) const { return analysis.burn_in < 0.0 ? 0.2 * horizon : analysis.burn_in; }
};

const std::vector<std::string>& scenario_names();

/// Parses an INI-style file (top-level scenario/seed/output_dir plus
/// [environment], [grid], [frame_grid], [solver], [run], [analysis]) or a
/// manifest.json written by a previous run. Scenario-specific defaults fill
/// missing keys; unknown keys are errors. scenario_override (when non-empty)
/// replaces the file's scenario before defaults are applied.
RunConfig load_config(const std::string& path, const std::string& scenario_override = "");
RunConfig parse_config_text(const std::string& text, const std::string& scenario_override = "");

/// Canonical INI rendering of a resolved config (every key explicit).
std::string render_config(const RunConfig& cfg);

struct CheckItem {
    std::string name;
    double value = 0.0;
    std::string expectation;
    bool pass = false;
};

struct OutputFile {
    std::string name;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunReport {
    std::string scenario;
    std::string manifest_path;
    std::vector<OutputFile> outputs;
    std::vector<CheckItem> checks;
    std::vector<std::string> summary;  // human-readable lines
    double wall_seconds = 0.0;

    bool passed() const;
    std::string text(bool with_checks) const;
};

/// Runs the scenario, writes CSV files and manifest.json into cfg.output_dir and
/// evaluates the scenario's acceptance checks.
RunReport run(const RunConfig& cfg);

/// Worker count for Monte Carlo replicas from KPPFRONTS_WORKERS (default 1).
unsigned worker_count();

std::string sha256_hex(const std::string& bytes);

}  // namespace kpp
