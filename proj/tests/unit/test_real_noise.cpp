#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "environment.hpp"
#include "error.hpp"
#include "pde_solver.hpp"
#include "real_noise.hpp"

using namespace kpp;

namespace {

NoisePath constant_noise(double value, double t0, double t1, double dt) {
    const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt)) + 1;
    return NoisePath(t0, dt, std::vector<double>(n, value));
}

NoisePath sine_noise(double amp, double t0, double t1, double dt) {
    const auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(t0 + dt * static_cast<double>(i));
    return NoisePath(t0, dt, std::move(v));
}

}  // namespace

TEST(NoisePath, RejectsValuesAtOrBelowMinusOne) {
    EXPECT_THROW(NoisePath(0.0, 0.1, {0.0, -1.0}), Error);
    EXPECT_NO_THROW(NoisePath(0.0, 0.1, {0.0, -0.99}));
    const CoefficientPath a = sample_path(ConstantEnv{1.5}, 0.0, 1.0, 0.1, 0);
    const NoisePath xi = noise_from_coefficient(a);
    EXPECT_DOUBLE_EQ(xi(0.5), 0.5);
    EXPECT_DOUBLE_EQ(coefficient_from_noise(xi)(0.5), 1.5);
}

TEST(Equilibrium, ZeroNoiseGivesOne) {
    const NoisePath xi = constant_noise(0.0, -100.0, 10.0, 0.01);
    const double T = default_truncation(0.0);
    for (double t : {0.0, 3.3, 10.0}) EXPECT_NEAR(random_equilibrium(xi, t, T, 1e-3).Y, 1.0, 1e-9);
    const EquilibriumPath Y = equilibrium_path(xi, 0.0, 0.01, 1001, T, 1e-3);
    for (std::size_t i = 0; i < Y.Y.size(); ++i) ASSERT_NEAR(Y.Y[i], 1.0, 1e-9);
}

TEST(Equilibrium, ConstantNoiseGivesOnePlusXi) {
    for (double c : {-0.4, 0.3}) {
        const NoisePath xi = constant_noise(c, -200.0, 1.0, 0.01);
        EXPECT_NEAR(random_equilibrium(xi, 0.5, default_truncation(c), 1e-2).Y, 1.0 + c, 1e-9);
    }
}

TEST(Equilibrium, TruncationGuard) {
    const NoisePath xi = constant_noise(-0.5, -200.0, 1.0, 0.01);
    const double T = default_truncation(-0.5);
    EXPECT_LT(std::exp(-0.5 * T) / 0.5, 1e-10);
    EXPECT_THROW(random_equilibrium(xi, 0.0, 40.0, 1e-3), Error);
    EXPECT_THROW(random_equilibrium(xi, 0.0, 500.0, 1e-3), Error);  // window outside the support
    EXPECT_THROW(default_truncation(-1.0), Error);
}

TEST(Equilibrium, IncrementalPathMatchesDirectEvaluation) {
    const BoundedNoiseEnv env{1.0, 1.0, 0.5, 3};
    const NoisePath xi = noise_from_coefficient(sample_path(env, -60.0, 40.0, 0.01, 0));
    const double T = default_truncation(-0.5);
    const EquilibriumPath Y = equilibrium_path(xi, 0.0, 0.01, 4001, T, 1e-3);
    for (std::size_t i = 0; i < Y.Y.size(); i += 500)
        EXPECT_NEAR(Y.Y[i], random_equilibrium(xi, Y.Y.time(i), T, 1e-3).Y, 1e-10);
    EXPECT_GT(Y.Y.min(), 0.5 - 1e-9);
    EXPECT_LT(Y.Y.max(), 1.5 + 1e-9);
    EXPECT_LE(equilibrium_ode_residual(Y, xi), 1e-3);
}

TEST(Equilibrium, SmoothNoiseSolvesTheOde) {
    const NoisePath xi = sine_noise(0.3, -80.0, 30.0, 0.01);
    const double T = default_truncation(-0.3);
    const EquilibriumPath Y = equilibrium_path(xi, 0.0, 0.01, 3001, T, 1e-3);
    EXPECT_LT(equilibrium_ode_residual(Y, xi), 1e-5);
}

TEST(Normalization, ConjugatesTheTwoEquations) {
    // u = Y v maps solutions of v_t = v_xx + Y v (1 - v) to solutions of
    // u_t = u_xx + u (1 + xi - u).
    const BoundedNoiseEnv env{1.0, 1.0, 0.4, 5};
    const NoisePath xi = noise_from_coefficient(sample_path(env, -70.0, 20.0, 0.005, 0));
    const double T = default_truncation(-0.4);
    const EquilibriumPath Y = equilibrium_path(xi, 0.0, 0.005, 4001, T, 1e-3);
    const CoefficientPath y = Y.as_coefficient();
    const Grid1D g = Grid1D::with_spacing(-20.0, 40.0, 0.1);
    const Field v0 = Field::from_function(g, 0.0, [](double x) { return 0.5 * (1.0 - std::tanh(x)); });
    SolverConfig kpp_cfg;
    kpp_cfg.dt = 0.005;
    SolverConfig noise_cfg = kpp_cfg;
    noise_cfg.model = ReactionModel::RealNoise;
    // Zero-flux ends commute with the scaling, unlike a fixed Dirichlet value.
    Solver v(v0, y, {}, BoundaryCondition::neumann_zero(), kpp_cfg);
    const Field u0 = denormalize(v0, Y.Y[0]);
    Solver u(u0, coefficient_from_noise(xi), {}, BoundaryCondition::neumann_zero(), noise_cfg);
    v.advance_to(5.0);
    u.advance_to(5.0);
    const Field back = normalize(u.field(), y(5.0));
    double err = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) err = std::max(err, std::abs(back.values[i] - v.field().values[i]));
    EXPECT_LT(err, 1e-3);
    EXPECT_THROW(normalize(u0, 0.0), Error);
}

TEST(RealNoiseFront, ConnectsYToZero) {
    const BoundedNoiseEnv env{1.0, 1.0, 0.5, 1};
    const NoisePath xi = noise_from_coefficient(sample_path(env, -200.0, 0.0, 0.01, 0));
    const double T = default_truncation(-0.5);
    const WaveProfile U = real_noise_front(0.5, xi, 0.0, 60.0, Grid1D::with_spacing(-40.0, 60.0, 0.1), SolverConfig{},
                                           T, 1e-3);
    const double y0 = random_equilibrium(xi, 0.0, T, 1e-3).Y;
    EXPECT_NEAR(U.values.front() / y0, 1.0, 1e-6);
    EXPECT_LT(U.values.back(), 1e-10);
    for (std::size_t i = 1; i < U.values.size(); ++i) EXPECT_LE(U.values[i], U.values[i - 1]);
}
