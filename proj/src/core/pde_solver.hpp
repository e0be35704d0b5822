#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "environment.hpp"

namespace kpp {

struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t nx = 3;

    double dx() const noexcept { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double x(std::size_t i) const noexcept { return x_min + dx() * static_cast<double>(i); }
    void validate() const;

    /// Grid on [x_min, x_max'] with spacing as close to dx as possible while
    /// keeping x_min and x_max exact.
    static Grid1D with_spacing(double x_min, double x_max, double dx);
};

struct Field {
    Grid1D grid;
    std::vector<double> values;
    double time = 0.0;

    static Field from_function(const Grid1D& grid, double time, const std::function<double(double)>& f);
};

/// One side of the truncated domain.
struct BoundarySide {
    enum class Kind { Dirichlet, NeumannZero, ExponentialTail };
    Kind kind = Kind::Dirichlet;
    /// Dirichlet value, or the decay rate for ExponentialTail (v_x = -rate v,
    /// realized through an exponentially extrapolated ghost node; right side only).
    double value = 0.0;

    static BoundarySide dirichlet(double v) { return {Kind::Dirichlet, v}; }
    static BoundarySide neumann_zero() { return {Kind::NeumannZero, 0.0}; }
    static BoundarySide exponential_tail(double rate) { return {Kind::ExponentialTail, rate}; }
};

struct BoundaryCondition {
    BoundarySide left = BoundarySide::dirichlet(1.0);
    BoundarySide right = BoundarySide::dirichlet(0.0);

    static BoundaryCondition front_like(double left = 1.0, double right = 0.0) {
        return {BoundarySide::dirichlet(left), BoundarySide::dirichlet(right)};
    }
    static BoundaryCondition neumann_zero() { return {BoundarySide::neumann_zero(), BoundarySide::neumann_zero()}; }
};

enum class AdvectionScheme { Upwind, Centered };

/// Pointwise update used for each half of the Strang-split reaction.
///  - Explicit: forward Euler, first order, monotone only for dt*max a <= 1.
///  - SemiImplicit: linearly implicit Euler, first order, unconditionally monotone.
///  - Exact: closed-form logistic flow with frozen coefficient, second order overall.
enum class ReactionTreatment { Explicit, SemiImplicit, Exact };

/// Kpp: a(t) u (1 - u).   RealNoise: u (a(t) - u), i.e. a = 1 + xi.
enum class ReactionModel { Kpp, RealNoise };

struct SolverConfig {
    double dt = 0.02;
    AdvectionScheme advection = AdvectionScheme::Upwind;
    ReactionTreatment reaction = ReactionTreatment::Exact;
    ReactionModel model = ReactionModel::Kpp;

    /// Throws when the explicit monotonicity bound dt * max a <= 1 fails.
    void validate(const CoefficientPath& path) const;
};

/// Frame drift in v_t = v_xx + c v_x + ..., queried once per step with the
/// step midpoint and the step length; empty means the fixed frame.
using SpeedFn = std::function<double(double t_mid, double h)>;

/// Time integrator for u_t = u_xx + c(t) u_x + reaction. Owns a copy of the
/// coefficient path and scratch buffers; not thread safe, one per run.
class Solver {
public:
    Solver(Field initial, CoefficientPath path, SpeedFn speed, BoundaryCondition bc, SolverConfig cfg);

    const Field& field() const noexcept { return field_; }
    double time() const noexcept { return field_.time; }
    const SolverConfig& config() const noexcept { return cfg_; }

    void step() { step(cfg_.dt); }
    /// Advances by h <= dt; throws Error(Numeric) on non-finite output.
    void step(double h);
    /// Full steps followed by one exact residual sub-step landing on t.
    void advance_to(double t);

private:
    void react(double tau, double a);
    void implicit_transport(double h, double c);

    Field field_;
    CoefficientPath path_;
    SpeedFn speed_;
    BoundaryCondition bc_;
    SolverConfig cfg_;
    std::vector<double> lower_, diag_, upper_, rhs_, scratch_;
    bool warned_centered_ = false;
};

Field step(const Field& field, const CoefficientPath& path, const SpeedFn& speed, const BoundaryCondition& bc,
           const SolverConfig& cfg);

std::vector<Field> solve(const Field& u0, const CoefficientPath& path, const SpeedFn& speed,
                         const BoundaryCondition& bc, const SolverConfig& cfg, double t_end,
                         std::span<const double> snapshot_times);

/// true iff low <= high + tol everywhere; throws on grid/time mismatch.
bool comparison_check(std::span<const Field> traj_low, std::span<const Field> traj_high, double tol);

/// Solves a tridiagonal system in place (Thomas algorithm). rhs receives the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs, std::span<double> scratch);

}  // namespace kpp
