#include "real_noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace kpp {

NoisePath::NoisePath(double t_start, double dt, std::vector<double> values)
    : UniformSeries(t_start, dt, std::move(values)) {
    if (!(min_ > -1.0)) {
        std::ostringstream msg;
        msg << "noise must stay above -1 (min " << min_ << ")";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
}

NoisePath noise_from_coefficient(const CoefficientPath& a) {
    std::vector<double> xi(a.values().begin(), a.values().end());
    for (double& v : xi) v -= 1.0;
    return NoisePath(a.t_start(), a.dt(), std::move(xi));
}

CoefficientPath coefficient_from_noise(const NoisePath& xi) {
    std::vector<double> a(xi.values().begin(), xi.values().end());
    for (double& v : a) v += 1.0;
    return CoefficientPath(xi.t_start(), xi.dt(), std::move(a));
}

double default_truncation(double xi_inf, double tol) {
    require(xi_inf > -1.0, "noise infimum must exceed -1");
    require(tol > 0.0 && tol < 1.0, "tolerance must lie in (0, 1)");
    const double rate = 1.0 + xi_inf;
    return 1.1 * std::max(0.0, (-std::log(tol) - std::log(rate)) / rate);
}

namespace {

double truncation_bound(double xi_inf, double T) { return std::exp(-(1.0 + xi_inf) * T) / (1.0 + xi_inf); }

/// Fitted integral of exp(E) over [r0, r1] ending at `end`, where E(end) = 0 and
/// E decreases going back in time; returns the sum and E at r0.
struct BackwardSum {
    double sum = 0.0;
    double E = 0.0;
};

BackwardSum integrate_back(const NoisePath& xi, double end, double length, double dq) {
    BackwardSum out;
    double hi = end;
    const auto cells = static_cast<std::size_t>(std::ceil(length / dq - 1e-9));
    for (std::size_t k = 0; k < cells; ++k) {
        const double lo = std::max(end - length, end - dq * static_cast<double>(k + 1));
        const double h = hi - lo;
        const double drop = h + xi.integral(lo, hi);
        const double E_lo = out.E - drop;
        out.sum += h * std::exp(E_lo) * std::expm1(drop) / drop;
        out.E = E_lo;
        hi = lo;
    }
    return out;
}

}  // namespace

EquilibriumEstimate random_equilibrium(const NoisePath& xi, double t, double T_trunc, double dq) {
    require(T_trunc > 0.0 && dq > 0.0, "truncation and quadrature step must be positive");
    if (!xi.contains(t) || !xi.contains(t - T_trunc)) {
        std::ostringstream msg;
        msg << "equilibrium window [" << t - T_trunc << ", " << t << "] outside the noise support";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    const double bound = truncation_bound(xi.min(), T_trunc);
    if (!(bound < 1e-10)) {
        std::ostringstream msg;
        msg << "truncation T = " << T_trunc << " too short: tail bound " << bound << " >= 1e-10 (need T >= "
            << default_truncation(xi.min()) << ")";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    const BackwardSum s = integrate_back(xi, t, T_trunc, dq);
    EquilibriumEstimate out;
    const double tail = std::exp(s.E) / (1.0 + xi(t - T_trunc));
    out.integral = s.sum + tail;
    out.Y = 1.0 / out.integral;
    out.tail_bound = std::exp(s.E) * std::abs(1.0 / (1.0 + xi.min()) - 1.0 / (1.0 + xi.max()));
    return out;
}

EquilibriumPath equilibrium_path(const NoisePath& xi, double t_start, double dt, std::size_t n, double T_trunc,
                                 double dq) {
    require(n >= 1 && dt > 0.0, "equilibrium grid needs n >= 1 and dt > 0");
    const double t_end = t_start + dt * static_cast<double>(n - 1);
    if (!xi.contains(t_end)) fail(ErrorKind::InvalidArgument, "equilibrium grid extends past the noise support");
    std::vector<double> Y(n);
    double I = random_equilibrium(xi, t_start, T_trunc, dq).integral;
    Y[0] = 1.0 / I;
    constexpr std::size_t refresh = 10000;
    for (std::size_t i = 1; i < n; ++i) {
        const double t = t_start + dt * static_cast<double>(i);
        if (i % refresh == 0) {
            I = random_equilibrium(xi, t, T_trunc, dq).integral;
        } else {
            const double t_prev = t_start + dt * static_cast<double>(i - 1);
            const BackwardSum step = integrate_back(xi, t, t - t_prev, dq);
            I = std::exp(step.E) * I + step.sum;
        }
        if (!(I > 0.0) || !std::isfinite(I)) {
            std::ostringstream msg;
            msg << "equilibrium integral degenerate at t = " << t;
            fail(ErrorKind::Numeric, msg.str());
        }
        Y[i] = 1.0 / I;
    }
    return EquilibriumPath{UniformSeries(t_start, dt, std::move(Y)), T_trunc, dq};
}

double equilibrium_ode_residual(const EquilibriumPath& Y, const NoisePath& xi) {
    const UniformSeries& y = Y.Y;
    require(y.size() >= 2, "residual needs at least two samples");
    const double h = y.dt();
    auto F = [&](std::size_t i) { return y[i] * (1.0 + xi(y.time(i)) - y[i]); };
    double worst = 0.0;
    double F_lo = F(0);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double F_hi = F(i + 1);
        worst = std::max(worst, std::abs((y[i + 1] - y[i]) / h - 0.5 * (F_lo + F_hi)));
        F_lo = F_hi;
    }
    return worst;
}

Field normalize(const Field& u, double Y_t) {
    require(Y_t > 0.0 && std::isfinite(Y_t), "equilibrium value must be positive");
    Field out = u;
    for (double& v : out.values) v /= Y_t;
    return out;
}

Field denormalize(const Field& u, double Y_t) {
    require(Y_t > 0.0 && std::isfinite(Y_t), "equilibrium value must be positive");
    Field out = u;
    for (double& v : out.values) v *= Y_t;
    return out;
}

WaveProfile real_noise_front(double mu, const NoisePath& xi, double t0, double T, const Grid1D& grid,
                             const SolverConfig& cfg, double T_trunc, double dq) {
    require(T > 0.0, "pullback time must be positive");
    const double dt = xi.dt();
    const auto n = static_cast<std::size_t>(std::llround(T / dt)) + 1;
    const EquilibriumPath Y = equilibrium_path(xi, t0 - dt * static_cast<double>(n - 1), dt, n, T_trunc, dq);
    const CoefficientPath a = Y.as_coefficient();
    if (mu >= std::sqrt(a.min())) {
        std::ostringstream msg;
        msg << "mu = " << mu << " outside (0, sqrt(inf Y) = " << std::sqrt(a.min()) << ")";
        warn(msg.str());
    }
    SolverConfig normalized = cfg;
    normalized.model = ReactionModel::Kpp;
    WaveProfile front = pullback_profile(mu, a, a.t_end(), a.t_end() - a.t_start(), grid, normalized);
    const double y0 = a[a.size() - 1];
    for (double& v : front.values) v *= y0;
    front.anchor_time = t0;
    return front;
}

}  // namespace kpp
