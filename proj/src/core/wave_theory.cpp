#include "wave_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace kpp {

double super_profile(double mu, double x) { return x <= 0.0 ? 1.0 : std::min(1.0, std::exp(-mu * x)); }

SpeedIntegral wave_speed_integral(double mu, const CoefficientPath& path, double a_lower) {
    require(mu > 0.0 && std::isfinite(mu), "mu must be positive");
    require(path.size() >= 2, "speed integral needs a non-empty path");
    if (a_lower > 0.0 && mu >= std::sqrt(a_lower)) {
        std::ostringstream msg;
        msg << "mu = " << mu << " outside (0, sqrt(a_lower) = " << std::sqrt(a_lower) << ")";
        warn(msg.str());
    }
    std::vector<double> c(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) c[i] = (mu * mu + path[i]) / mu;
    SpeedIntegral out{mu, CoefficientPath(path.t_start(), path.dt(), std::move(c)), {}, {}};
    out.times.resize(path.size());
    out.C_values.resize(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        out.times[i] = path.time(i);
        out.C_values[i] = out.speed.cumulative(i);
    }
    return out;
}

FrontTrack speed_track(const SpeedIntegral& C) {
    FrontTrack tr{0.5, FrontSide::Right, C.times, C.C_values};
    return tr;
}

// ---------------------------------------------------------------------------

double discrete_frame_speed(double mu, double a, double h, double dx, AdvectionScheme advection,
                            ReactionTreatment reaction) {
    const double gain = reaction == ReactionTreatment::Exact ? std::exp(a * h) : std::pow(1.0 + 0.5 * a * h, 2);
    const double s = std::sinh(0.5 * mu * dx);
    const double second = 4.0 * s * s / (dx * dx);
    const double first = advection == AdvectionScheme::Centered ? -std::sinh(mu * dx) / dx : std::expm1(-mu * dx) / dx;
    return ((1.0 - gain) / h - second) / first;
}

MovingFrame make_moving_frame(double mu, const CoefficientPath& path, double dx, const SolverConfig& cfg) {
    require(mu > 0.0, "mu must be positive");
    auto shared_path = std::make_shared<const CoefficientPath>(path);
    auto displacement = std::make_shared<double>(0.0);
    const AdvectionScheme adv = cfg.advection;
    const ReactionTreatment rt = cfg.reaction;
    SpeedFn fn = [shared_path, displacement, mu, dx, adv, rt](double t_mid, double h) {
        const double c = discrete_frame_speed(mu, (*shared_path)(t_mid), h, dx, adv, rt);
        *displacement += h * c;
        return c;
    };
    return MovingFrame{std::move(fn), displacement};
}

// ---------------------------------------------------------------------------

BoundedPrimitive build_bounded_primitive(const CoefficientPath& path, double window, double epsilon,
                                         double a_lower_ref) {
    require(window > 0.0 && epsilon > 0.0, "window and epsilon must be positive");
    require(a_lower_ref > 0.0, "reference lower mean must be positive");
    if (window >= path.duration()) fail(ErrorKind::InvalidArgument, "primitive window longer than the path");
    const double dt = path.dt();
    const double half = 0.5 * window;
    const auto i0 = static_cast<std::size_t>(std::ceil(half / dt - 1e-9));
    const auto i1 = static_cast<std::size_t>(std::floor((path.duration() - half) / dt + 1e-9));
    if (i1 < i0 + 2) fail(ErrorKind::InvalidArgument, "primitive window leaves no interior support");
    const std::size_t m = i1 - i0 + 1;

    std::vector<double> mean(m);
    std::vector<double> A(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double t = path.time(i0 + j);
        mean[j] = path.integral(t - half, t + half) / window;
    }
    for (std::size_t j = 0; j + 1 < m; ++j)
        A[j + 1] = A[j] + 0.5 * dt * ((mean[j] - path[i0 + j]) + (mean[j + 1] - path[i0 + j + 1]));

    BoundedPrimitive out;
    out.window = window;
    out.epsilon = epsilon;
    out.a_lower_ref = a_lower_ref;
    out.essinf_mean = *std::min_element(mean.begin(), mean.end());
    for (double v : A) out.sup_abs = std::max(out.sup_abs, std::abs(v));

    const double t_first = path.time(i0);
    double t_bar = 0.0;
    double A_bar = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        t_bar += dt * static_cast<double>(j);
        A_bar += A[j];
    }
    t_bar /= static_cast<double>(m);
    A_bar /= static_cast<double>(m);
    double stt = 0.0;
    double stA = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double dtj = dt * static_cast<double>(j) - t_bar;
        stt += dtj * dtj;
        stA += dtj * (A[j] - A_bar);
    }
    out.drift_slope = stA / stt;

    out.windowed_mean = UniformSeries(t_first, dt, std::move(mean));
    out.A = UniformSeries(t_first, dt, std::move(A));

    std::ostringstream why;
    if (out.essinf_mean < a_lower_ref - epsilon)
        why << "windowed mean drops to " << out.essinf_mean << " < a_lower - epsilon = " << a_lower_ref - epsilon;
    if (std::abs(out.drift_slope) > epsilon) {
        if (!why.str().empty()) why << "; ";
        why << "primitive drifts with slope " << out.drift_slope;
    }
    out.failure = why.str();
    out.ok = out.failure.empty();
    return out;
}

void WaveParams::validate(double a_lower) const {
    require(a_lower > 0.0, "a_lower must be positive");
    const double cap = std::min(2.0 * mu, std::sqrt(a_lower));
    if (!(mu > 0.0 && mu < mu_tilde && mu_tilde < cap)) {
        std::ostringstream msg;
        msg << "wave parameters need 0 < mu < mu_tilde < min(2 mu, sqrt(a_lower)); got mu = " << mu
            << ", mu_tilde = " << mu_tilde << ", bound = " << cap;
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    require(d > 0.0 && std::isfinite(d), "d must be positive");
}

double WaveParams::mu_tilde_default(double mu, double a_lower) {
    require(mu > 0.0 && a_lower > 0.0 && mu < std::sqrt(a_lower), "mu must lie in (0, sqrt(a_lower))");
    return std::min(1.5 * mu, 0.5 * (mu + std::sqrt(a_lower)));
}

double sub_front_position(const WaveParams& p, const BoundedPrimitive& A, double t) {
    return (std::log(p.d) + std::log(p.mu_tilde) - std::log(p.mu)) / (p.mu_tilde - p.mu) + A.at(t) / p.mu;
}

double sub_profile(const WaveParams& p, const BoundedPrimitive& A, double t, double x) {
    const double k = p.mu_tilde / p.mu - 1.0;
    const double xs = std::max(x, sub_front_position(p, A, t));
    return std::exp(-p.mu * xs) * (1.0 - p.d * std::exp(k * A.at(t) - (p.mu_tilde - p.mu) * xs));
}

Field sub_field(const WaveParams& p, const BoundedPrimitive& A, const Grid1D& grid, double t) {
    return Field::from_function(grid, t, [&](double x) { return sub_profile(p, A, t, x); });
}

Field super_field(double mu, const Grid1D& grid, double t) {
    return Field::from_function(grid, t, [mu](double x) { return super_profile(mu, x); });
}

Field residual(std::span<const Field> v, double mu, const CoefficientPath& path) {
    if (v.size() < 3) fail(ErrorKind::InvalidArgument, "residual needs three snapshots");
    const Field& f0 = v[0];
    const Field& f1 = v[1];
    const Field& f2 = v[2];
    const double h0 = f1.time - f0.time;
    const double h1 = f2.time - f1.time;
    require(h0 > 0.0 && std::abs(h1 - h0) <= 1e-9 * std::max(1.0, std::abs(h0)), "snapshots must be equally spaced");
    for (const Field* f : {&f0, &f2})
        require(f->grid.nx == f1.grid.nx && f->grid.x_min == f1.grid.x_min && f->grid.x_max == f1.grid.x_max,
                "snapshots must share a grid");
    const Grid1D& g = f1.grid;
    const double dx = g.dx();
    const double a = path(f1.time);
    const double c = (mu * mu + a) / mu;
    Field out{Grid1D{g.x_min + dx, g.x_max - dx, g.nx - 2}, std::vector<double>(g.nx - 2), f1.time};
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        const double u = f1.values[i];
        const double ut = (f2.values[i] - f0.values[i]) / (2.0 * h0);
        const double uxx = (f1.values[i + 1] - 2.0 * u + f1.values[i - 1]) / (dx * dx);
        const double ux = (f1.values[i + 1] - f1.values[i - 1]) / (2.0 * dx);
        out.values[i - 1] = ut - uxx - c * ux - a * u * (1.0 - u);
    }
    return out;
}

double check_sub_residual(const WaveParams& p, const BoundedPrimitive& A, const CoefficientPath& path,
                          const Grid1D& grid, std::span<const double> times, double delta) {
    require(delta > 0.0, "time offset must be positive");
    double worst = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        const Field snaps[3] = {sub_field(p, A, grid, t - delta), sub_field(p, A, grid, t),
                                sub_field(p, A, grid, t + delta)};
        const Field r = residual(snaps, p.mu, path);
        const double xw = sub_front_position(p, A, t);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            if (r.grid.x(i) >= xw) worst = std::max(worst, r.values[i]);
    }
    return worst;
}

double check_super_residual(double mu, const CoefficientPath& path, const Grid1D& grid,
                            std::span<const double> times, double delta) {
    double worst = std::numeric_limits<double>::infinity();
    for (double t : times) {
        const Field snaps[3] = {super_field(mu, grid, t - delta), super_field(mu, grid, t),
                                super_field(mu, grid, t + delta)};
        const Field r = residual(snaps, mu, path);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            if (super_profile(mu, r.grid.x(i)) < 1.0) worst = std::min(worst, r.values[i]);
    }
    return worst;
}

std::vector<double> residual_check_times(const BoundedPrimitive& A, std::size_t count) {
    require(count >= 2, "need at least two check times");
    const std::size_t cells = A.A.size() - 1;
    std::vector<double> out;
    for (std::size_t j = 0; j < count; ++j) {
        const std::size_t i = (j * (cells - 1)) / (count - 1);
        out.push_back(A.A.time(i) + 0.5 * A.A.dt());
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Grid1D residual_check_grid(const WaveParams& p, const BoundedPrimitive& A, double dx) {
    const double base = (std::log(p.d) + std::log(p.mu_tilde) - std::log(p.mu)) / (p.mu_tilde - p.mu);
    const double lo = base + A.A.min() / p.mu - 2.0 * dx;
    const double hi = base + A.A.max() / p.mu + 30.0 / p.mu;
    return Grid1D::with_spacing(lo, hi, dx);
}

WaveParams calibrate_sub_solution(double mu, const CoefficientPath& path, const BoundedPrimitive& A,
                                  double a_lower, double mu_tilde, double d_min, double tol) {
    WaveParams p{mu, mu_tilde > 0.0 ? mu_tilde : WaveParams::mu_tilde_default(mu, a_lower), 1.0};
    p.validate(a_lower);
    if (!A.ok) warn("bounded primitive check failed: " + A.failure);
    const std::vector<double> times = residual_check_times(A, 100);
    const double delta = std::min(1e-3, 0.25 * A.A.dt());
    const double d0 = std::exp(A.sup_abs) * std::max(d_min, 4.0);
    double worst = 0.0;
    for (int j = 0; j <= 60; ++j) {
        p.d = std::ldexp(d0, j);
        worst = check_sub_residual(p, A, path, residual_check_grid(p, A, 0.02), times, delta);
        if (worst <= tol) return p;
    }
    std::ostringstream msg;
    msg << "no d up to " << p.d << " gives a sub-solution (largest residual " << worst << ")";
    fail(ErrorKind::Analysis, msg.str());
}

// ---------------------------------------------------------------------------

double WaveProfile::tail_deviation() const {
    require(decay_mu.has_value(), "tail deviation needs a decay rate");
    double worst = 0.0;
    for (std::size_t i = (3 * grid.nx) / 4; i < grid.nx; ++i)
        worst = std::max(worst, std::abs(values[i] / std::exp(-*decay_mu * grid.x(i)) - 1.0));
    return worst;
}

namespace {

void require_support(const CoefficientPath& path, double s, double t) {
    if (!path.contains(s) || !path.contains(t)) {
        std::ostringstream msg;
        msg << "run window [" << s << ", " << t << "] outside the coefficient path support [" << path.t_start()
            << ", " << path.t_end() << "]";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
}

std::vector<double> pullback_run(double mu, const CoefficientPath& path, double t0, double T, const Grid1D& grid,
                                 const SolverConfig& cfg) {
    require(T > 0.0, "pullback time must be positive");
    require_support(path, t0 - T, t0);
    MovingFrame frame = make_moving_frame(mu, path, grid.dx(), cfg);
    BoundaryCondition bc{BoundarySide::dirichlet(1.0), BoundarySide::exponential_tail(mu)};
    Solver solver(super_field(mu, grid, t0 - T), path, frame.speed, bc, cfg);
    solver.advance_to(t0);
    return solver.field().values;
}

WaveProfile make_profile(double mu, const Grid1D& grid, double t0, double T, std::vector<double> longer,
                         const std::vector<double>& shorter) {
    WaveProfile out;
    out.grid = grid;
    out.anchor_time = t0;
    out.decay_mu = mu;
    out.T = T;
    double excess = 0.0;
    for (std::size_t i = 0; i < longer.size(); ++i) {
        out.convergence_estimate = std::max(out.convergence_estimate, std::abs(longer[i] - shorter[i]));
        excess = std::max(excess, longer[i] - shorter[i]);
    }
    out.monotone_in_T = excess <= 1e-9;
    if (!out.monotone_in_T) {
        std::ostringstream msg;
        msg << "pullback profile increased with T by " << excess;
        warn(msg.str());
    }
    out.values = std::move(longer);
    return out;
}

double interpolate(const Field& f, double x) {
    const double dx = f.grid.dx();
    const double s = (x - f.grid.x_min) / dx;
    const auto last = static_cast<double>(f.grid.nx - 2);
    const double i = std::clamp(std::floor(s), 0.0, last);
    const double w = s - i;
    const auto k = static_cast<std::size_t>(i);
    return (1.0 - w) * f.values[k] + w * f.values[k + 1];
}

}  // namespace

WaveProfile pullback_profile(double mu, const CoefficientPath& path, double t0, double T, const Grid1D& grid,
                             const SolverConfig& cfg) {
    grid.validate();
    std::vector<double> full = pullback_run(mu, path, t0, T, grid, cfg);
    std::vector<double> half = pullback_run(mu, path, t0, 0.5 * T, grid, cfg);
    return make_profile(mu, grid, t0, T, std::move(full), half);
}

WaveProfile pullback_until_converged(double mu, const CoefficientPath& path, double t0, double T_init,
                                     double T_cap, const Grid1D& grid, const SolverConfig& cfg, double tol) {
    require(T_init > 0.0 && T_cap >= T_init, "need 0 < T_init <= T_cap");
    grid.validate();
    double T = T_init;
    std::vector<double> shorter = pullback_run(mu, path, t0, 0.5 * T, grid, cfg);
    std::vector<double> longer = pullback_run(mu, path, t0, T, grid, cfg);
    for (;;) {
        double dist = 0.0;
        for (std::size_t i = 0; i < longer.size(); ++i) dist = std::max(dist, std::abs(longer[i] - shorter[i]));
        if (dist <= tol || 2.0 * T > T_cap) break;
        shorter = std::move(longer);
        T *= 2.0;
        longer = pullback_run(mu, path, t0, T, grid, cfg);
    }
    WaveProfile out = make_profile(mu, grid, t0, T, std::move(longer), shorter);
    if (out.convergence_estimate > tol) {
        std::ostringstream msg;
        msg << "pullback not converged at the cap T = " << T << " (distance " << out.convergence_estimate << ")";
        warn(msg.str());
    }
    return out;
}

Field recenter(const Field& field, double shift) {
    const double dx = field.grid.dx();
    const auto k_lo = static_cast<long long>(std::ceil((field.grid.x_min - shift) / dx - 1e-9));
    const auto k_hi = static_cast<long long>(std::floor((field.grid.x_max - shift) / dx + 1e-9));
    if (k_hi - k_lo < 2) fail(ErrorKind::InvalidArgument, "recentring leaves fewer than three nodes");
    Field out;
    out.time = field.time;
    out.grid = Grid1D{static_cast<double>(k_lo) * dx, static_cast<double>(k_hi) * dx,
                      static_cast<std::size_t>(k_hi - k_lo + 1)};
    out.values.resize(out.grid.nx);
    for (std::size_t i = 0; i < out.grid.nx; ++i) {
        const double x = static_cast<double>(k_lo + static_cast<long long>(i)) * dx;
        out.values[i] = interpolate(field, x + shift);
    }
    return out;
}

TrackedRun tracked_run(const Field& u0, const CoefficientPath& path, std::optional<double> mu,
                       const BoundaryCondition& bc, const SolverConfig& cfg, double t_end,
                       std::span<const double> levels, double sample_dt, double exit_margin) {
    require(sample_dt > 0.0, "sample interval must be positive");
    require_support(path, u0.time, t_end);
    MovingFrame frame;
    if (mu) frame = make_moving_frame(*mu, path, u0.grid.dx(), cfg);
    Solver solver(u0, path, frame.speed, bc, cfg);
    FrontRecorder recorder(std::vector<double>(levels.begin(), levels.end()), FrontSide::Right, exit_margin);
    recorder.record(solver.field(), frame.offset());
    const double t_start = u0.time;
    for (std::size_t k = 1; solver.time() < t_end - 1e-12 && recorder.all_active(); ++k) {
        const double next = std::min(t_start + sample_dt * static_cast<double>(k), t_end);
        solver.advance_to(next);
        recorder.record(solver.field(), frame.offset());
    }
    return TrackedRun{solver.field(), recorder.tracks(), recorder.lost_time()};
}

CriticalFront critical_front_profile(const CoefficientPath& path, double t0, double T, const Grid1D& grid,
                                     const SolverConfig& cfg, double sample_dt) {
    require(T > 0.0, "evolution time must be positive");
    grid.validate();
    const Field u0 = Field::from_function(grid, t0 - T, [](double x) { return x <= 0.0 ? 1.0 : 0.0; });
    const double levels[] = {0.5};
    TrackedRun run = tracked_run(u0, path, std::nullopt, BoundaryCondition::front_like(1.0, 0.0), cfg, t0, levels,
                                 sample_dt, front_exit_margin(grid));
    if (!std::isnan(run.lost_time)) {
        std::ostringstream msg;
        msg << "half-level crossing lost at t = " << run.lost_time << " (front left the domain)";
        fail(ErrorKind::Analysis, msg.str());
    }
    const double x_half = level_crossing(run.final, 0.5);
    const Field centred = recenter(run.final, x_half);
    CriticalFront out;
    out.profile.grid = centred.grid;
    out.profile.values = centred.values;
    out.profile.anchor_time = t0;
    out.profile.T = T;
    out.track = std::move(run.tracks.front());
    return out;
}

StabilityMetric run_stability(const CoefficientPath& path, const Grid1D& grid, const SolverConfig& cfg,
                              const StabilityOptions& opt) {
    require(opt.amplitude > -1.0 && opt.width > 0.0 && opt.T > 0.0 && opt.sample_dt > 0.0,
            "invalid stability options");
    require_support(path, opt.t0 - opt.T_pull, opt.t0 + opt.T);
    const WaveProfile U = pullback_profile(opt.mu, path, opt.t0, opt.T_pull, grid, cfg);
    const Field U0 = U.field();
    const double xc = level_crossing(U0, 0.5);
    Field u0 = U0;
    for (std::size_t i = 0; i < grid.nx; ++i) {
        const double z = (grid.x(i) - xc) / opt.width;
        const double bump = std::abs(z) < 1.0 ? std::pow(std::cos(0.5 * std::numbers::pi * z), 2) : 0.0;
        u0.values[i] = std::min(1.0, U0.values[i] * (1.0 + opt.amplitude * bump));
    }
    const BoundaryCondition bc{BoundarySide::dirichlet(1.0), BoundarySide::exponential_tail(opt.mu)};
    MovingFrame frame_ref = make_moving_frame(opt.mu, path, grid.dx(), cfg);
    MovingFrame frame_pert = make_moving_frame(opt.mu, path, grid.dx(), cfg);
    Solver ref(U0, path, frame_ref.speed, bc, cfg);
    Solver pert(u0, path, frame_pert.speed, bc, cfg);

    StabilityMetric out;
    out.tail_cutoff = opt.tail_cutoff;
    out.times.push_back(opt.t0);
    out.alpha_values.push_back(stability_alpha(pert.field(), ref.field(), opt.tail_cutoff));
    const double t_end = opt.t0 + opt.T;
    for (std::size_t k = 1; ref.time() < t_end - 1e-12; ++k) {
        const double next = std::min(opt.t0 + opt.sample_dt * static_cast<double>(k), t_end);
        ref.advance_to(next);
        pert.advance_to(next);
        out.times.push_back(next);
        out.alpha_values.push_back(stability_alpha(pert.field(), ref.field(), opt.tail_cutoff));
    }
    return out;
}

}  // namespace kpp
