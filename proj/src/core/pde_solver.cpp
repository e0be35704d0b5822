#include "pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace kpp {

namespace {
constexpr double kUnderflowFloor = 1e-300;
}  // namespace

void Grid1D::validate() const {
    require(nx >= 3, "grid needs at least three points");
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min, "grid needs x_max > x_min");
}

Grid1D Grid1D::with_spacing(double x_min, double x_max, double dx) {
    require(dx > 0.0, "grid spacing must be positive");
    require(x_max > x_min, "grid needs x_max > x_min");
    const auto cells = static_cast<std::size_t>(std::llround((x_max - x_min) / dx));
    require(cells >= 2, "grid spacing too coarse for the domain (need at least two cells)");
    return Grid1D{x_min, x_max, cells + 1};
}

Field Field::from_function(const Grid1D& grid, double time, const std::function<double(double)>& f) {
    grid.validate();
    Field out{grid, std::vector<double>(grid.nx), time};
    for (std::size_t i = 0; i < grid.nx; ++i) out.values[i] = f(grid.x(i));
    return out;
}

void SolverConfig::validate(const CoefficientPath& path) const {
    require(dt > 0.0 && std::isfinite(dt), "solver dt must be positive");
    if (reaction == ReactionTreatment::Explicit && dt * path.max() > 1.0 + 1e-12) {
        std::ostringstream msg;
        msg << "explicit reaction needs dt * max a <= 1 (dt = " << dt << ", max a = " << path.max() << ")";
        fail(ErrorKind::Config, msg.str());
    }
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs, std::span<double> scratch) {
    const std::size_t n = diag.size();
    double denom = diag[0];
    scratch[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * scratch[i - 1];
        scratch[i] = (i + 1 < n) ? upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

// ---------------------------------------------------------------------------

Solver::Solver(Field initial, CoefficientPath path, SpeedFn speed, BoundaryCondition bc, SolverConfig cfg)
    : field_(std::move(initial)), path_(std::move(path)), speed_(std::move(speed)), bc_(bc), cfg_(cfg) {
    field_.grid.validate();
    require(field_.values.size() == field_.grid.nx, "field size does not match its grid");
    require(bc_.left.kind != BoundarySide::Kind::ExponentialTail, "exponential tail closure is right-side only");
    if (bc_.right.kind == BoundarySide::Kind::ExponentialTail)
        require(bc_.right.value >= 0.0, "exponential tail rate must be non-negative");
    cfg_.validate(path_);
    for (double v : field_.values) require(std::isfinite(v), "initial field must be finite");
    const std::size_t n = field_.grid.nx;
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    rhs_.resize(n);
    scratch_.resize(n);
}

void Solver::react(double tau, double a) {
    auto& u = field_.values;
    const std::size_t lo = bc_.left.kind == BoundarySide::Kind::Dirichlet ? 1 : 0;
    const std::size_t hi = bc_.right.kind == BoundarySide::Kind::Dirichlet ? u.size() - 1 : u.size();
    const bool kpp = cfg_.model == ReactionModel::Kpp;
    // Both models are r u (1 - u / K): Kpp has r = a, K = 1; RealNoise has r = K = a.
    const double r = a;
    const double inv_k = kpp ? 1.0 : 1.0 / a;
    switch (cfg_.reaction) {
        case ReactionTreatment::Exact: {
            const double em1 = std::expm1(r * tau);
            for (std::size_t i = lo; i < hi; ++i) u[i] = u[i] * (1.0 + em1) / (1.0 + u[i] * em1 * inv_k);
            break;
        }
        case ReactionTreatment::Explicit:
            for (std::size_t i = lo; i < hi; ++i) u[i] += tau * r * u[i] * (1.0 - u[i] * inv_k);
            break;
        case ReactionTreatment::SemiImplicit:
            for (std::size_t i = lo; i < hi; ++i) u[i] = u[i] * (1.0 + tau * r) / (1.0 + tau * r * u[i] * inv_k);
            break;
    }
}

void Solver::implicit_transport(double h, double c) {
    const std::size_t n = field_.grid.nx;
    const double dx = field_.grid.dx();
    const double inv_dx2 = 1.0 / (dx * dx);

    // Stencil weights of L v = v_xx + c v_x at an interior node.
    double wl = inv_dx2;
    double wc = -2.0 * inv_dx2;
    double wr = inv_dx2;
    if (cfg_.advection == AdvectionScheme::Upwind) {
        if (c >= 0.0) {
            wc -= c / dx;
            wr += c / dx;
        } else {
            wl -= c / dx;
            wc += c / dx;
        }
    } else {
        wl -= 0.5 * c / dx;
        wr += 0.5 * c / dx;
        if (!warned_centered_ && (wl < 0.0 || wr < 0.0)) {
            warned_centered_ = true;
            std::ostringstream msg;
            msg << "centered advection with cell Peclet |c| dx / 2 = " << std::abs(c) * dx / 2
                << " > 1: discrete comparison principle not guaranteed";
            warn(msg.str());
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        lower_[i] = -h * wl;
        diag_[i] = 1.0 - h * wc;
        upper_[i] = -h * wr;
        rhs_[i] = field_.values[i];
    }
    lower_[0] = 0.0;
    upper_[n - 1] = 0.0;

    switch (bc_.left.kind) {
        case BoundarySide::Kind::Dirichlet:
            diag_[0] = 1.0;
            upper_[0] = 0.0;
            rhs_[0] = bc_.left.value;
            break;
        case BoundarySide::Kind::NeumannZero:
            // Mirror ghost v_{-1} = v_1.
            upper_[0] = -h * (wr + wl);
            break;
        case BoundarySide::Kind::ExponentialTail:
            break;
    }
    switch (bc_.right.kind) {
        case BoundarySide::Kind::Dirichlet:
            diag_[n - 1] = 1.0;
            lower_[n - 1] = 0.0;
            rhs_[n - 1] = bc_.right.value;
            break;
        case BoundarySide::Kind::NeumannZero:
            lower_[n - 1] = -h * (wl + wr);
            break;
        case BoundarySide::Kind::ExponentialTail: {
            // Ghost v_n = exp(-rate dx) v_{n-1}.
            const double g = std::exp(-bc_.right.value * dx);
            diag_[n - 1] = 1.0 - h * (wc + g * wr);
            break;
        }
    }

    solve_tridiagonal(lower_, diag_, upper_, rhs_, scratch_);
    field_.values.swap(rhs_);
}

void Solver::step(double h) {
    require(h > 0.0 && h <= cfg_.dt * (1.0 + 1e-12), "sub-step must lie in (0, dt]");
    const double t = field_.time;
    const double t_mid = t + 0.5 * h;
    const double a = path_(t_mid);
    const double c = speed_ ? speed_(t_mid, h) : 0.0;
    react(0.5 * h, a);
    implicit_transport(h, c);
    react(0.5 * h, a);
    field_.time = t + h;
    for (std::size_t i = 0; i < field_.values.size(); ++i) {
        // Values near the underflow threshold lose their relative accuracy and
        // form a nearly flat floor that reaction would amplify like exp(int a);
        // flushing them to zero is monotone and keeps that floor out.
        if (std::abs(field_.values[i]) < kUnderflowFloor) field_.values[i] = 0.0;
        if (!std::isfinite(field_.values[i])) {
            std::ostringstream msg;
            msg << "blow-up: non-finite value at x = " << field_.grid.x(i) << ", t = " << field_.time;
            fail(ErrorKind::Numeric, msg.str());
        }
    }
}

void Solver::advance_to(double t) {
    require(t >= field_.time - 1e-12, "cannot advance backwards in time");
    const double dt = cfg_.dt;
    const double eps = 1e-9 * dt;
    while (field_.time + dt <= t + eps) {
        step(dt);
    }
    const double rest = t - field_.time;
    if (rest > eps) step(rest);
    field_.time = t;
}

// ---------------------------------------------------------------------------

Field step(const Field& field, const CoefficientPath& path, const SpeedFn& speed, const BoundaryCondition& bc,
           const SolverConfig& cfg) {
    Solver solver(field, path, speed, bc, cfg);
    solver.step();
    return solver.field();
}

std::vector<Field> solve(const Field& u0, const CoefficientPath& path, const SpeedFn& speed,
                         const BoundaryCondition& bc, const SolverConfig& cfg, double t_end,
                         std::span<const double> snapshot_times) {
    require(t_end >= u0.time, "t_end precedes the initial time");
    double prev = u0.time;
    for (double t : snapshot_times) {
        require(t >= prev - 1e-12 && t <= t_end + 1e-12, "snapshot times must be increasing within [t0, t_end]");
        prev = t;
    }
    Solver solver(u0, path, speed, bc, cfg);
    std::vector<Field> out;
    out.reserve(snapshot_times.size());
    for (double t : snapshot_times) {
        solver.advance_to(t);
        out.push_back(solver.field());
    }
    return out;
}

bool comparison_check(std::span<const Field> traj_low, std::span<const Field> traj_high, double tol) {
    if (traj_low.size() != traj_high.size()) fail(ErrorKind::InvalidArgument, "trajectories differ in length");
    for (std::size_t k = 0; k < traj_low.size(); ++k) {
        const Field& lo = traj_low[k];
        const Field& hi = traj_high[k];
        if (lo.grid.nx != hi.grid.nx || lo.grid.x_min != hi.grid.x_min || lo.grid.x_max != hi.grid.x_max)
            fail(ErrorKind::InvalidArgument, "trajectories use different grids");
        if (std::abs(lo.time - hi.time) > 1e-9 * std::max(1.0, std::abs(lo.time)))
            fail(ErrorKind::InvalidArgument, "trajectories use different snapshot times");
        for (std::size_t i = 0; i < lo.values.size(); ++i)
            if (lo.values[i] > hi.values[i] + tol) return false;
    }
    return true;
}

}  // namespace kpp
