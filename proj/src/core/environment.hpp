#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace kpp {

// ---------------------------------------------------------------------------
// Sampled trajectories
// ---------------------------------------------------------------------------

/// Piecewise-linear time series on a uniform grid t_start + i*dt.
class UniformSeries {
public:
    UniformSeries() = default;
    UniformSeries(double t_start, double dt, std::vector<double> values);

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_start_ + dt_ * static_cast<double>(values_.size() - 1); }
    double dt() const noexcept { return dt_; }
    double duration() const noexcept { return t_end() - t_start_; }
    std::size_t size() const noexcept { return values_.size(); }
    double time(std::size_t i) const noexcept { return t_start_ + dt_ * static_cast<double>(i); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    bool contains(double t) const noexcept;
    /// Linear interpolation; throws outside [t_start, t_end].
    double operator()(double t) const;

    /// Exact integral of the interpolant over [s, t] from cumulative trapezoid sums.
    double integral(double s, double t) const;
    /// Same integral, summed cell by cell from s to t without the cumulative table.
    double integral_direct(double s, double t) const;

    /// Integral of the interpolant from t_start to sample i.
    double cumulative(std::size_t i) const noexcept { return prefix_[i]; }

    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }

protected:
    double t_start_ = 0.0;
    double dt_ = 1.0;
    std::vector<double> values_;
    std::vector<double> prefix_;
    double min_ = 0.0;
    double max_ = 0.0;

private:
    double prefix_at(double t) const;
    std::size_t cell_of(double t) const;
};

/// Strictly positive coefficient trajectory a(t).
class CoefficientPath : public UniformSeries {
public:
    CoefficientPath() = default;
    CoefficientPath(double t_start, double dt, std::vector<double> values);

    /// The same trajectory re-indexed so that new(tau) = old(tau + offset).
    CoefficientPath shifted(double offset) const;
};

// ---------------------------------------------------------------------------
// Environment families
// ---------------------------------------------------------------------------

struct ConstantEnv {
    double a = 1.0;
};

struct PeriodicEnv {
    double mean = 1.0;
    double amplitude = 0.5;
    double period = 1.0;
    double phase = 0.0;
};

enum class SpikeProfile { TentLinear, SmoothBump };

/// The explicit nonautonomous example: unit/double plateaus of growing length
/// separated by narrow spikes and valleys.
struct PiecewiseH2Env {
    int n_max = 12;
    SpikeProfile profile = SpikeProfile::TentLinear;
};

/// a(t) = 1 + bound * tanh(Z(t)) with Z a stationary Ornstein-Uhlenbeck process.
struct BoundedNoiseEnv {
    double relaxation_time = 1.0;
    double volatility = 1.0;
    double bound = 0.5;
    std::uint64_t seed = 0;
};

struct TabulatedEnv {
    std::vector<double> times;
    std::vector<double> values;
};

using EnvironmentSpec = std::variant<ConstantEnv, PeriodicEnv, PiecewiseH2Env, BoundedNoiseEnv, TabulatedEnv>;

void validate(const EnvironmentSpec& spec);
std::string kind_name(const EnvironmentSpec& spec);

/// Samples the environment on t_start + i*dt_env, i = 0..n with t_start + n*dt_env >= t_end.
/// For BoundedNoise the path is fully determined by spec.seed + seed.
CoefficientPath sample_path(const EnvironmentSpec& spec, double t_start, double t_end, double dt_env,
                            std::uint64_t seed);

/// Ornstein-Uhlenbeck sample Z at n grid points spaced dt, pre-run for ten
/// relaxation times from Z = 0. Exposed for the real-noise module and tests.
std::vector<double> sample_ou(double relaxation_time, double volatility, std::size_t n, double dt,
                              std::uint64_t seed);

// ---------------------------------------------------------------------------
// The explicit (H2) example
// ---------------------------------------------------------------------------

/// Spike interval [l_n, L_n]; the plateau [L_n, l_{n+1}] follows it.
struct H2Interval {
    double l = 0.0;
    double L = 0.0;
};

/// l_0 = 0, L_n = l_n + 2^{-2(n+1)}, l_{n+1} = L_n + n + 1.
H2Interval h2_interval(int n);
/// Plateau value g_n: 1 for even n, 2 for odd n.
double h2_plateau_value(int n);
double eval_h2_example(double t, int n_max, SpikeProfile profile);

// ---------------------------------------------------------------------------
// Mean statistics
// ---------------------------------------------------------------------------

struct MeanBounds {
    double a_lower = 0.0;
    double a_upper = 0.0;
    double a_hat = 0.0;
    double window_min = 0.0;
};

double running_mean(const CoefficientPath& path, double s, double t);
MeanBounds estimate_mean_bounds(const CoefficientPath& path, double window_min);

/// Window endpoints used by the mean-bound and speed estimators: every k-th sample
/// with k*dt >= max(dt, duration/2000), always including the last sample.
std::vector<std::size_t> stride_indices(std::size_t n, double dt, double duration);

}  // namespace kpp
