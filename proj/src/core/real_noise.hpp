#pragma once

#include <cstddef>

#include "environment.hpp"
#include "pde_solver.hpp"
#include "wave_theory.hpp"

namespace kpp {

/// Noise xi(t) on a uniform grid; every sample must exceed -1.
class NoisePath : public UniformSeries {
public:
    NoisePath() = default;
    NoisePath(double t_start, double dt, std::vector<double> values);
};

/// xi = a - 1 and back.
NoisePath noise_from_coefficient(const CoefficientPath& a);
CoefficientPath coefficient_from_noise(const NoisePath& xi);

/// Smallest T with e^{-(1 + xi_inf) T} / (1 + xi_inf) < tol, padded by 10%.
double default_truncation(double xi_inf, double tol = 1e-10);

struct EquilibriumEstimate {
    double Y = 1.0;
    double integral = 1.0;  // I = 1 / Y
    double tail_bound = 0.0;
};

/// Y(t) = 1 / I(t), I(t) = integral over s <= 0 of exp(s + int_0^s xi(t + tau) dtau).
/// The exponent is integrated exactly on cells of width dq and each cell uses
/// the exponentially fitted rule, so constant noise is integrated exactly.
/// The remainder beyond -T_trunc is added as e^{E(-T)} / (1 + xi(t - T)).
EquilibriumEstimate random_equilibrium(const NoisePath& xi, double t, double T_trunc, double dq);

struct EquilibriumPath {
    UniformSeries Y;
    double T_trunc = 0.0;
    double dq = 0.0;

    /// Y as a positive coefficient path, for the normalized equation.
    CoefficientPath as_coefficient() const { return CoefficientPath(Y.t_start(), Y.dt(), {Y.values().begin(), Y.values().end()}); }
};

/// Y on t_start + i*dt, i < n. Advances I(t) by one decay factor and one fitted
/// increment per step; recomputes from scratch every 10^4 steps.
EquilibriumPath equilibrium_path(const NoisePath& xi, double t_start, double dt, std::size_t n, double T_trunc,
                                 double dq);

/// sup over cells of |(Y_{i+1} - Y_i)/dt - (F_i + F_{i+1})/2| with F = Y (1 + xi - Y).
double equilibrium_ode_residual(const EquilibriumPath& Y, const NoisePath& xi);

Field normalize(const Field& u, double Y_t);
Field denormalize(const Field& u, double Y_t);

/// Pullback front of u_t = u_xx + Y(t) u (1 - u) scaled by Y(t0): connects
/// Y(t0) on the left to 0 on the right.
WaveProfile real_noise_front(double mu, const NoisePath& xi, double t0, double T, const Grid1D& grid,
                             const SolverConfig& cfg, double T_trunc, double dq);

}  // namespace kpp
