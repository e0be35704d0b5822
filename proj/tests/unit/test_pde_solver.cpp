#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "environment.hpp"
#include "error.hpp"
#include "oracles.hpp"
#include "pde_solver.hpp"
#include "wave_theory.hpp"

using namespace kpp;

namespace {

Field constant_field(const Grid1D& g, double t, double v) {
    return Field::from_function(g, t, [v](double) { return v; });
}

}  // namespace

TEST(Tridiagonal, MatchesDenseSolution) {
    // A = tridiag(-1, 4, -2), x = (1, 2, 3, 4, 5).
    const std::vector<double> lower{0.0, -1.0, -1.0, -1.0, -1.0};
    const std::vector<double> diag{4.0, 4.0, 4.0, 4.0, 4.0};
    const std::vector<double> upper{-2.0, -2.0, -2.0, -2.0, 0.0};
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> rhs(5);
    for (std::size_t i = 0; i < 5; ++i) {
        rhs[i] = diag[i] * x[i];
        if (i > 0) rhs[i] += lower[i] * x[i - 1];
        if (i < 4) rhs[i] += upper[i] * x[i + 1];
    }
    std::vector<double> scratch(5);
    solve_tridiagonal(lower, diag, upper, rhs, scratch);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(rhs[i], x[i], 1e-13);
}

TEST(Grid, SpacingKeepsEndpoints) {
    const Grid1D g = Grid1D::with_spacing(-20.0, 400.0, 0.1);
    EXPECT_EQ(g.nx, 4201u);
    EXPECT_DOUBLE_EQ(g.x(0), -20.0);
    EXPECT_DOUBLE_EQ(g.x(g.nx - 1), 400.0);
    EXPECT_NEAR(g.dx(), 0.1, 1e-12);
    EXPECT_THROW(Grid1D::with_spacing(0.0, 0.1, 0.2), Error);
}

TEST(Solver, ExactReactionReproducesLogisticOde) {
    const Grid1D g = Grid1D::with_spacing(0.0, 10.0, 0.5);
    const CoefficientPath path = sample_path(ConstantEnv{1.3}, 0.0, 5.0, 0.01, 0);
    SolverConfig cfg;
    cfg.dt = 0.05;
    Solver s(constant_field(g, 0.0, 0.01), path, {}, BoundaryCondition::neumann_zero(), cfg);
    s.advance_to(4.0);
    EXPECT_DOUBLE_EQ(s.time(), 4.0);
    for (double v : s.field().values) EXPECT_NEAR(v, oracle::logistic(0.01, 1.3, 4.0), 1e-12);
}

TEST(Solver, FirstOrderReactionsConvergeToLogistic) {
    const Grid1D g = Grid1D::with_spacing(0.0, 2.0, 0.5);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 4.0, 0.01, 0);
    const double exact = oracle::logistic(0.05, 1.0, 3.0);
    for (ReactionTreatment r : {ReactionTreatment::Explicit, ReactionTreatment::SemiImplicit}) {
        double previous = 0.0;
        for (double dt : {0.1, 0.05, 0.025}) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.reaction = r;
            Solver s(constant_field(g, 0.0, 0.05), path, {}, BoundaryCondition::neumann_zero(), cfg);
            s.advance_to(3.0);
            const double err = std::abs(s.field().values[2] - exact);
            if (previous > 0.0) {
                EXPECT_LT(err, 0.75 * previous) << "dt " << dt;
            }
            previous = err;
        }
        EXPECT_LT(previous, 5e-3);
    }
}

TEST(Solver, TimeDependentCoefficientUsesStepMidpoint) {
    // u' = a(t) u (1 - u) with a = 1 + 0.5 sin(2 pi t): u = e^{A} u0 / (1 - u0 + u0 e^{A}).
    const PeriodicEnv e{1.0, 0.5, 1.0, 0.0};
    const CoefficientPath path = sample_path(e, 0.0, 3.0, 1e-4, 0);
    const Grid1D g = Grid1D::with_spacing(0.0, 1.0, 0.5);
    SolverConfig cfg;
    cfg.dt = 0.01;
    Solver s(constant_field(g, 0.0, 0.02), path, {}, BoundaryCondition::neumann_zero(), cfg);
    s.advance_to(2.5);
    const double A = oracle::periodic_integral(1.0, 0.5, 1.0, 0.0, 0.0, 2.5);
    const double exact = 0.02 * std::exp(A) / (1.0 - 0.02 + 0.02 * std::exp(A));
    EXPECT_NEAR(s.field().values[1], exact, 2e-5);
}

TEST(Solver, DiffusionOfCosineModeDecaysAtDiscreteRate) {
    // u = 1 - eps cos(k x) on [0, pi] with zero-flux ends: the linearization at
    // u = 1 damps the mode at rate k^2 + a.
    const Grid1D g = Grid1D::with_spacing(0.0, std::numbers::pi, std::numbers::pi / 200.0);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 2.0, 0.01, 0);
    const double eps = 1e-6;
    SolverConfig cfg;
    cfg.dt = 1e-3;
    Solver s(Field::from_function(g, 0.0, [&](double x) { return 1.0 - eps * std::cos(2.0 * x); }), path, {},
             BoundaryCondition::neumann_zero(), cfg);
    s.advance_to(0.5);
    const double expected = eps * std::exp(-(4.0 + 1.0) * 0.5);
    EXPECT_NEAR(1.0 - s.field().values.front(), expected, 0.02 * expected);
}

TEST(Solver, ComparisonPrincipleAndInvariantInterval) {
    const Grid1D g = Grid1D::with_spacing(-20.0, 60.0, 0.1);
    const CoefficientPath path = sample_path(PeriodicEnv{1.0, 0.8, 2.0, 0.0}, 0.0, 30.0, 0.01, 0);
    const Field low = Field::from_function(g, 0.0, [](double x) { return x < 0.0 ? 0.6 : 0.0; });
    const Field high = Field::from_function(g, 0.0, [](double x) { return x < 2.0 ? 1.0 : 0.3 * std::exp(-x); });
    const std::vector<double> snaps{5.0, 10.0, 20.0, 30.0};
    SolverConfig cfg;
    for (AdvectionScheme adv : {AdvectionScheme::Upwind, AdvectionScheme::Centered}) {
        cfg.advection = adv;
        const SpeedFn drift = [](double, double) { return 1.5; };
        const auto a = solve(low, path, drift, BoundaryCondition::front_like(), cfg, 30.0, snaps);
        const auto b = solve(high, path, drift, BoundaryCondition::front_like(), cfg, 30.0, snaps);
        EXPECT_TRUE(comparison_check(a, b, 1e-12));
        for (const Field& f : b)
            for (double v : f.values) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0 + 1e-12);
            }
    }
}

TEST(Solver, ComparisonCheckRejectsMismatchedSnapshots) {
    const Grid1D g = Grid1D::with_spacing(0.0, 1.0, 0.5);
    const std::vector<Field> a{constant_field(g, 0.0, 0.2)};
    const std::vector<Field> b{constant_field(g, 1.0, 0.3)};
    EXPECT_THROW(comparison_check(a, b, 0.0), Error);
    const std::vector<Field> c{constant_field(g, 0.0, 0.1)};
    EXPECT_FALSE(comparison_check(a, c, 1e-3));
}

TEST(Solver, ExplicitReactionEnforcesMonotonicityBound) {
    const CoefficientPath path = sample_path(ConstantEnv{3.0}, 0.0, 1.0, 0.01, 0);
    SolverConfig cfg;
    cfg.reaction = ReactionTreatment::Explicit;
    cfg.dt = 0.5;
    EXPECT_THROW(cfg.validate(path), Error);
    cfg.dt = 0.2;
    EXPECT_NO_THROW(cfg.validate(path));
}

TEST(Solver, CenteredAdvectionWarnsAtLargeCellPeclet) {
    std::vector<std::string> warnings;
    set_warning_sink([&](const std::string& m) { warnings.push_back(m); });
    const Grid1D g = Grid1D::with_spacing(0.0, 50.0, 1.0);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 1.0, 0.01, 0);
    SolverConfig cfg;
    cfg.advection = AdvectionScheme::Centered;
    Solver s(constant_field(g, 0.0, 0.5), path, [](double, double) { return 5.0; }, BoundaryCondition::front_like(),
             cfg);
    s.step();
    s.step();
    set_warning_sink({});
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings.front().find("Peclet"), std::string::npos);
}

TEST(Solver, ExponentialTailKeepsDiscreteModeStationary) {
    // Small-amplitude e^{-mu x} is the stationary linear mode of the scheme in
    // the scheme-consistent frame, including the right boundary. The left
    // Dirichlet node is not a reaction fixed point, so the split steps leave a
    // boundary layer there; it decays over a few units and is excluded.
    const double mu = 0.5;
    const Grid1D g = Grid1D::with_spacing(0.0, 40.0, 0.1);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 10.0, 0.01, 0);
    SolverConfig cfg;
    const MovingFrame frame = make_moving_frame(mu, path, g.dx(), cfg);
    const double amp = 1e-10;
    const Field u0 = Field::from_function(g, 0.0, [&](double x) { return amp * std::exp(-mu * x); });
    const BoundaryCondition bc{BoundarySide::dirichlet(amp), BoundarySide::exponential_tail(mu)};
    Solver s(u0, path, frame.speed, bc, cfg);
    s.advance_to(5.0);
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double ratio = s.field().values[i] / u0.values[i];
        if (g.x(i) >= 20.0) {
            EXPECT_NEAR(ratio, 1.0, 1e-8) << i;
        } else {
            EXPECT_NEAR(ratio, 1.0, 0.02) << i;
        }
    }
    const double c = discrete_frame_speed(mu, 1.0, cfg.dt, g.dx(), cfg.advection, cfg.reaction);
    EXPECT_NEAR(frame.offset(), 5.0 * c, 1e-9);
    // First-order upwinding shifts the frame speed by O(dx) from mu + a / mu.
    EXPECT_NEAR(c, 2.5, 0.1);
}

TEST(Solver, FlushesUnderflowToZero) {
    const Grid1D g = Grid1D::with_spacing(0.0, 400.0, 0.1);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 20.0, 0.01, 0);
    SolverConfig cfg;
    Solver s(Field::from_function(g, 0.0, [](double x) { return x <= 0.0 ? 1.0 : 0.0; }), path, {},
             BoundaryCondition::front_like(), cfg);
    s.advance_to(20.0);
    for (double v : s.field().values) EXPECT_TRUE(v == 0.0 || v >= 1e-300);
    EXPECT_EQ(s.field().values.back(), 0.0);
}

TEST(Solver, RejectsBadInputs) {
    const Grid1D g = Grid1D::with_spacing(0.0, 10.0, 0.5);
    const CoefficientPath path = sample_path(ConstantEnv{1.0}, 0.0, 1.0, 0.01, 0);
    SolverConfig cfg;
    cfg.dt = -1.0;
    EXPECT_THROW(Solver(constant_field(g, 0.0, 0.5), path, {}, BoundaryCondition::front_like(), cfg), Error);
    cfg.dt = 0.02;
    const BoundaryCondition left_tail{BoundarySide::exponential_tail(0.5), BoundarySide::dirichlet(0.0)};
    EXPECT_THROW(Solver(constant_field(g, 0.0, 0.5), path, {}, left_tail, cfg), Error);
    Solver s(constant_field(g, 0.0, 0.5), path, {}, BoundaryCondition::front_like(), cfg);
    EXPECT_THROW(s.advance_to(2.0), Error);
}
