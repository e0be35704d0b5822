// Command-line front end; links only the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kppfronts/kppfronts.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitCheck = 3;

int exit_code(kpp_status s) {
    switch (s) {
        case KPP_OK: return 0;
        case KPP_ERR_INVALID_ARGUMENT:
        case KPP_ERR_CONFIG:
        case KPP_ERR_IO: return kExitConfig;
        default: return kExitNumeric;
    }
}

int report_error(kpp_status s) {
    std::fprintf(stderr, "kppfronts: %s: %s\n", kpp_status_name(s), kpp_last_error());
    return exit_code(s);
}

void print_warning(const char* message, void*) { std::fprintf(stderr, "kppfronts: warning: %s\n", message); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher-KPP fronts in time-heterogeneous environments", "kppfronts"};
    app.set_version_flag("--version", std::string(kpp_version()));

    const std::vector<std::string> scenarios{"env-stats", "speed",        "front",     "critical-front",
                                             "stability", "nonexistence", "realnoise", "cocycle"};
    std::string scenario;
    std::string config_path;
    unsigned long long seed = 0;
    std::string out_dir;
    bool check = false;
    bool print_config = false;

    app.add_option("scenario", scenario, "Scenario to run")->required()->check(CLI::IsMember(scenarios));
    app.add_option("--config", config_path, "INI config or manifest.json of a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_flag("--check", check, "Evaluate acceptance checks; exit 3 if any fails");
    app.add_flag("--print-config", print_config, "Print the resolved config before running");
    app.footer("Exit codes: 0 ok, 1 config or i/o error, 2 numeric failure, 3 check failed.\n"
               "KPPFRONTS_WORKERS sets the number of worker threads for replicas.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    kpp_set_warning_callback(print_warning, nullptr);
    kpp_config* cfg = nullptr;
    kpp_status s = kpp_config_load(config_path.c_str(), scenario.c_str(), &cfg);
    if (s != KPP_OK) return report_error(s);
    if (*seed_opt && (s = kpp_config_set_seed(cfg, seed)) != KPP_OK) {
        kpp_config_free(cfg);
        return report_error(s);
    }
    if (!out_dir.empty() && (s = kpp_config_set_output_dir(cfg, out_dir.c_str())) != KPP_OK) {
        kpp_config_free(cfg);
        return report_error(s);
    }
    if (print_config) std::printf("%s\n", kpp_config_render(cfg));

    kpp_report* report = nullptr;
    s = kpp_run(cfg, &report);
    kpp_config_free(cfg);
    if (s != KPP_OK) return report_error(s);
    std::fputs(kpp_report_text(report, check ? 1 : 0), stdout);
    const bool passed = kpp_report_passed(report) != 0;
    kpp_report_free(report);
    return check && !passed ? kExitCheck : 0;
}
