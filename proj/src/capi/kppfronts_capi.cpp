#include "kppfronts/kppfronts.h"

#include <cstring>
#include <exception>
#include <mutex>
#include <new>
#include <optional>
#include <string>

#include "environment.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "front_analysis.hpp"
#include "real_noise.hpp"
#include "wave_theory.hpp"

struct kpp_path {
    kpp::CoefficientPath path;
};

struct kpp_profile {
    kpp::WaveProfile profile;
    std::optional<kpp::FrontTrack> track;
};

struct kpp_config {
    kpp::RunConfig cfg;
    mutable std::string rendered;
};

struct kpp_report {
    kpp::RunReport report;
    std::string text_plain;
    std::string text_checks;
};

namespace {

thread_local std::string g_last_error;

kpp_status status_of(kpp::ErrorKind kind) {
    switch (kind) {
        case kpp::ErrorKind::InvalidArgument: return KPP_ERR_INVALID_ARGUMENT;
        case kpp::ErrorKind::Config: return KPP_ERR_CONFIG;
        case kpp::ErrorKind::Numeric: return KPP_ERR_NUMERIC;
        case kpp::ErrorKind::Analysis: return KPP_ERR_ANALYSIS;
        case kpp::ErrorKind::Io: return KPP_ERR_IO;
    }
    return KPP_ERR_INTERNAL;
}

/// Runs body, translating exceptions into status codes and the thread-local message.
template <class F>
kpp_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return KPP_OK;
    } catch (const kpp::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return KPP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return KPP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return KPP_ERR_INTERNAL;
    }
}

void need(const void* p, const char* name) {
    if (!p) kpp::fail(kpp::ErrorKind::InvalidArgument, std::string(name) + " must not be NULL");
}

kpp_status make_path(const kpp::EnvironmentSpec& spec, double t_start, double t_end, double dt, kpp_path** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        kpp::validate(spec);
        *out = new kpp_path{kpp::sample_path(spec, t_start, t_end, dt, 0)};
    });
}

kpp::SolverConfig solver_from(const kpp_solver_options* o) {
    kpp::SolverConfig cfg;
    if (!o) return cfg;
    cfg.dt = o->dt;
    switch (o->advection) {
        case KPP_ADVECTION_UPWIND: cfg.advection = kpp::AdvectionScheme::Upwind; break;
        case KPP_ADVECTION_CENTERED: cfg.advection = kpp::AdvectionScheme::Centered; break;
        default: kpp::fail(kpp::ErrorKind::InvalidArgument, "unknown advection scheme");
    }
    switch (o->reaction) {
        case KPP_REACTION_EXACT: cfg.reaction = kpp::ReactionTreatment::Exact; break;
        case KPP_REACTION_EXPLICIT: cfg.reaction = kpp::ReactionTreatment::Explicit; break;
        case KPP_REACTION_SEMI_IMPLICIT: cfg.reaction = kpp::ReactionTreatment::SemiImplicit; break;
        default: kpp::fail(kpp::ErrorKind::InvalidArgument, "unknown reaction treatment");
    }
    return cfg;
}

kpp::Grid1D grid_from(const kpp_grid* g) {
    need(g, "grid");
    return kpp::Grid1D::with_spacing(g->x_min, g->x_max, g->dx);
}

std::mutex g_warning_mutex;

}  // namespace

extern "C" {

const char* kpp_version(void) { return kpp::kVersion; }

const char* kpp_last_error(void) { return g_last_error.c_str(); }

const char* kpp_status_name(kpp_status status) {
    switch (status) {
        case KPP_OK: return "ok";
        case KPP_ERR_INVALID_ARGUMENT: return "invalid argument";
        case KPP_ERR_CONFIG: return "configuration error";
        case KPP_ERR_NUMERIC: return "numeric failure";
        case KPP_ERR_ANALYSIS: return "analysis failure";
        case KPP_ERR_IO: return "i/o error";
        case KPP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void kpp_set_warning_callback(kpp_warning_fn fn, void* user) {
    std::lock_guard<std::mutex> lock(g_warning_mutex);
    if (!fn) {
        kpp::set_warning_sink({});
        return;
    }
    kpp::set_warning_sink([fn, user](const std::string& msg) { fn(msg.c_str(), user); });
}

kpp_solver_options kpp_solver_defaults(void) {
    const kpp::SolverConfig cfg;
    kpp_solver_options o;
    o.dt = cfg.dt;
    o.advection = cfg.advection == kpp::AdvectionScheme::Centered ? KPP_ADVECTION_CENTERED : KPP_ADVECTION_UPWIND;
    o.reaction = cfg.reaction == kpp::ReactionTreatment::Explicit       ? KPP_REACTION_EXPLICIT
                 : cfg.reaction == kpp::ReactionTreatment::SemiImplicit ? KPP_REACTION_SEMI_IMPLICIT
                                                                        : KPP_REACTION_EXACT;
    return o;
}

kpp_status kpp_path_constant(double a, double t_start, double t_end, double dt, kpp_path** out) {
    return make_path(kpp::ConstantEnv{a}, t_start, t_end, dt, out);
}

kpp_status kpp_path_periodic(double mean, double amplitude, double period, double phase, double t_start,
                             double t_end, double dt, kpp_path** out) {
    return make_path(kpp::PeriodicEnv{mean, amplitude, period, phase}, t_start, t_end, dt, out);
}

kpp_status kpp_path_h2(int n_max, int smooth, double t_start, double t_end, double dt, kpp_path** out) {
    kpp::PiecewiseH2Env e;
    e.n_max = n_max;
    e.profile = smooth ? kpp::SpikeProfile::SmoothBump : kpp::SpikeProfile::TentLinear;
    return make_path(e, t_start, t_end, dt, out);
}

kpp_status kpp_path_bounded_noise(double relaxation_time, double volatility, double bound, uint64_t seed,
                                  double t_start, double t_end, double dt, kpp_path** out) {
    return make_path(kpp::BoundedNoiseEnv{relaxation_time, volatility, bound, seed}, t_start, t_end, dt, out);
}

kpp_status kpp_path_tabulated(const double* times, const double* values, size_t n, double t_start, double t_end,
                              double dt, kpp_path** out) {
    if (n > 0 && (!times || !values)) {
        g_last_error = "times and values must not be NULL";
        return KPP_ERR_INVALID_ARGUMENT;
    }
    kpp::TabulatedEnv e;
    if (n > 0) {
        e.times.assign(times, times + n);
        e.values.assign(values, values + n);
    }
    return make_path(e, t_start, t_end, dt, out);
}

kpp_status kpp_path_from_samples(double t_start, double dt, const double* values, size_t n, kpp_path** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        need(values, "values");
        *out = new kpp_path{kpp::CoefficientPath(t_start, dt, std::vector<double>(values, values + n))};
    });
}

void kpp_path_free(kpp_path* path) { delete path; }

kpp_status kpp_path_info(const kpp_path* path, double* t_start, double* dt, size_t* n) {
    return guarded([&] {
        need(path, "path");
        if (t_start) *t_start = path->path.t_start();
        if (dt) *dt = path->path.dt();
        if (n) *n = path->path.size();
    });
}

kpp_status kpp_path_values(const kpp_path* path, double* out, size_t n) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        const auto v = path->path.values();
        std::copy_n(v.begin(), std::min(n, v.size()), out);
    });
}

kpp_status kpp_path_eval(const kpp_path* path, double t, double* out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = path->path(t);
    });
}

kpp_status kpp_path_integral(const kpp_path* path, double s, double t, double* out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = path->path.integral(s, t);
    });
}

kpp_status kpp_mean_bounds(const kpp_path* path, double window_min, double* a_lower, double* a_upper,
                           double* a_hat) {
    return guarded([&] {
        need(path, "path");
        const kpp::MeanBounds mb = kpp::estimate_mean_bounds(path->path, window_min);
        if (a_lower) *a_lower = mb.a_lower;
        if (a_upper) *a_upper = mb.a_upper;
        if (a_hat) *a_hat = mb.a_hat;
    });
}

kpp_status kpp_speed_integral(const kpp_path* path, double mu, double t, double* out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = kpp::wave_speed_integral(mu, path->path).at(t);
    });
}

kpp_status kpp_cocycle_residual(const kpp_path* path, double mu, double s, double t, double* out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = kpp::cocycle_residual(path->path, mu, s, t);
    });
}

kpp_status kpp_random_equilibrium(const kpp_path* a, double t, double truncation, double dq, double* Y) {
    return guarded([&] {
        need(a, "path");
        need(Y, "Y");
        const kpp::NoisePath xi = kpp::noise_from_coefficient(a->path);
        *Y = kpp::random_equilibrium(xi, t, truncation, dq).Y;
    });
}

kpp_status kpp_pullback_profile(const kpp_path* path, double mu, double t0, double T, const kpp_grid* grid,
                                const kpp_solver_options* solver, kpp_profile** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        kpp::WaveProfile p = kpp::pullback_profile(mu, path->path, t0, T, grid_from(grid), solver_from(solver));
        *out = new kpp_profile{std::move(p), std::nullopt};
    });
}

kpp_status kpp_critical_front(const kpp_path* path, double t0, double T, const kpp_grid* grid,
                              const kpp_solver_options* solver, double sample_dt, kpp_profile** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        kpp::CriticalFront cf =
            kpp::critical_front_profile(path->path, t0, T, grid_from(grid), solver_from(solver), sample_dt);
        *out = new kpp_profile{std::move(cf.profile), std::move(cf.track)};
    });
}

void kpp_profile_free(kpp_profile* profile) { delete profile; }

size_t kpp_profile_size(const kpp_profile* profile) { return profile ? profile->profile.values.size() : 0; }

kpp_status kpp_profile_data(const kpp_profile* profile, double* x, double* u, size_t n) {
    return guarded([&] {
        need(profile, "profile");
        const auto& p = profile->profile;
        const size_t m = std::min(n, p.values.size());
        for (size_t i = 0; i < m; ++i) {
            if (x) x[i] = p.grid.x(i);
            if (u) u[i] = p.values[i];
        }
    });
}

kpp_status kpp_profile_convergence(const kpp_profile* profile, double* estimate) {
    return guarded([&] {
        need(profile, "profile");
        need(estimate, "estimate");
        *estimate = profile->profile.convergence_estimate;
    });
}

kpp_status kpp_level_crossing(const kpp_profile* profile, double level, double* x) {
    return guarded([&] {
        need(profile, "profile");
        need(x, "x");
        *x = kpp::level_crossing(profile->profile.field(), level);
    });
}

kpp_status kpp_profile_speed(const kpp_profile* profile, double window_min, double burn_in, double* average,
                             double* least_mean, double* largest_mean) {
    return guarded([&] {
        need(profile, "profile");
        if (!profile->track) kpp::fail(kpp::ErrorKind::InvalidArgument, "profile carries no front track");
        const kpp::SpeedEstimate s = kpp::speed_estimate(*profile->track, window_min, burn_in);
        if (average) *average = s.average;
        if (least_mean) *least_mean = s.least_mean;
        if (largest_mean) *largest_mean = s.largest_mean;
    });
}

kpp_status kpp_config_load(const char* path, const char* scenario_override, kpp_config** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = nullptr;
        *out = new kpp_config{kpp::load_config(path, scenario_override ? scenario_override : ""), {}};
    });
}

kpp_status kpp_config_parse(const char* text, const char* scenario_override, kpp_config** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = nullptr;
        *out = new kpp_config{kpp::parse_config_text(text, scenario_override ? scenario_override : ""), {}};
    });
}

void kpp_config_free(kpp_config* config) { delete config; }

kpp_status kpp_config_set_seed(kpp_config* config, uint64_t seed) {
    return guarded([&] {
        need(config, "config");
        config->cfg.seed = seed;
    });
}

kpp_status kpp_config_set_output_dir(kpp_config* config, const char* dir) {
    return guarded([&] {
        need(config, "config");
        need(dir, "dir");
        if (!*dir) kpp::fail(kpp::ErrorKind::Config, "output directory must not be empty");
        config->cfg.output_dir = dir;
    });
}

const char* kpp_config_render(const kpp_config* config) {
    if (!config) return "";
    config->rendered = kpp::render_config(config->cfg);
    return config->rendered.c_str();
}

kpp_status kpp_run(const kpp_config* config, kpp_report** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        *out = nullptr;
        auto* r = new kpp_report{kpp::run(config->cfg), {}, {}};
        r->text_plain = r->report.text(false);
        r->text_checks = r->report.text(true);
        *out = r;
    });
}

void kpp_report_free(kpp_report* report) { delete report; }

int kpp_report_passed(const kpp_report* report) { return report && report->report.passed() ? 1 : 0; }

const char* kpp_report_text(const kpp_report* report, int with_checks) {
    if (!report) return "";
    return with_checks ? report->text_checks.c_str() : report->text_plain.c_str();
}

const char* kpp_report_manifest(const kpp_report* report) {
    return report ? report->report.manifest_path.c_str() : "";
}

}  // extern "C"
