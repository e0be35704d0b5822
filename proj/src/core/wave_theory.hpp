#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "environment.hpp"
#include "front_analysis.hpp"
#include "pde_solver.hpp"

namespace kpp {

/// min(1, e^{-mu x}).
double super_profile(double mu, double x);

/// C(t) = integral of c(s) = (mu^2 + a(s)) / mu from the path origin.
struct SpeedIntegral {
    double mu = 0.0;
    CoefficientPath speed;  // c(t) samples on the path grid
    std::vector<double> times;
    std::vector<double> C_values;

    double at(double t) const { return speed.integral(speed.t_start(), t); }
};

/// Warns (does not throw) when a_lower > 0 is given and mu lies outside (0, sqrt(a_lower)).
SpeedIntegral wave_speed_integral(double mu, const CoefficientPath& path, double a_lower = 0.0);

/// The C(t) samples as a front track, for feeding speed_estimate.
FrontTrack speed_track(const SpeedIntegral& C);

// ---------------------------------------------------------------------------
// Moving frame
// ---------------------------------------------------------------------------

/// Drift for which e^{-mu x} is an exact stationary mode of one split step of
/// the solver (reaction factor G, implicit transport with the discrete
/// second and first difference symbols). Tends to (mu^2 + a)/mu as h, dx -> 0.
double discrete_frame_speed(double mu, double a, double h, double dx, AdvectionScheme advection,
                            ReactionTreatment reaction);

/// Speed callback plus the accumulated frame displacement sum(h * c), which
/// converts moving-frame positions back to fixed coordinates.
struct MovingFrame {
    SpeedFn speed;
    std::shared_ptr<double> displacement;

    double offset() const { return displacement ? *displacement : 0.0; }
};

MovingFrame make_moving_frame(double mu, const CoefficientPath& path, double dx, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Bounded primitive and sub-solutions
// ---------------------------------------------------------------------------

/// A(t) = integral of (m_W - a) where m_W is the centered moving average of a
/// over the window, so that a + A' = m_W. Defined on [t_start + W/2, t_end - W/2].
struct BoundedPrimitive {
    double window = 0.0;
    double epsilon = 0.0;
    double a_lower_ref = 0.0;
    UniformSeries A;
    UniformSeries windowed_mean;
    double sup_abs = 0.0;
    double essinf_mean = 0.0;
    double drift_slope = 0.0;
    bool ok = false;
    std::string failure;

    double at(double t) const { return A(t); }
};

/// Flags failure (ok = false, reason in failure) when the essential infimum of
/// m_W drops below a_lower_ref - epsilon or A shows a linear drift above epsilon.
BoundedPrimitive build_bounded_primitive(const CoefficientPath& path, double window, double epsilon,
                                         double a_lower_ref);

struct WaveParams {
    double mu = 0.5;
    double mu_tilde = 0.75;
    double d = 1.0;

    /// 0 < mu < mu_tilde < min(2 mu, sqrt(a_lower)) and d > 0.
    void validate(double a_lower) const;
    static double mu_tilde_default(double mu, double a_lower);
};

/// Maximizer x_w(t) of the two-exponential profile.
double sub_front_position(const WaveParams& p, const BoundedPrimitive& A, double t);

/// e^{-mu x} - d e^{k A(t) - mu_tilde x} with k = mu_tilde/mu - 1 for x >= x_w(t),
/// frozen at its maximum for x <= x_w(t).
double sub_profile(const WaveParams& p, const BoundedPrimitive& A, double t, double x);

Field sub_field(const WaveParams& p, const BoundedPrimitive& A, const Grid1D& grid, double t);
Field super_field(double mu, const Grid1D& grid, double t);

/// v_t - v_xx - c v_x - a v (1 - v) with c = (mu^2 + a)/mu, centered differences
/// at the middle of three equally spaced snapshots; interior nodes only.
Field residual(std::span<const Field> v, double mu, const CoefficientPath& path);

/// Largest residual of the sub-solution over {x >= x_w(t)} at the given times.
double check_sub_residual(const WaveParams& p, const BoundedPrimitive& A, const CoefficientPath& path,
                          const Grid1D& grid, std::span<const double> times, double delta);

/// Smallest residual of the super-solution over {super < 1} at the given times.
double check_super_residual(double mu, const CoefficientPath& path, const Grid1D& grid,
                            std::span<const double> times, double delta);

/// Default mu_tilde (when mu_tilde <= 0) and the smallest d of the form
/// e^{sup|A|} * max(d_min, 4) * 2^j passing the residual check with tolerance tol.
WaveParams calibrate_sub_solution(double mu, const CoefficientPath& path, const BoundedPrimitive& A,
                                  double a_lower, double mu_tilde = 0.0, double d_min = 1.0, double tol = 1e-6);

/// Sample times and a check grid covering {x >= x_w(t)} for the sub-solution.
std::vector<double> residual_check_times(const BoundedPrimitive& A, std::size_t count);
Grid1D residual_check_grid(const WaveParams& p, const BoundedPrimitive& A, double dx);

// ---------------------------------------------------------------------------
// Front constructions
// ---------------------------------------------------------------------------

struct WaveProfile {
    Grid1D grid;
    std::vector<double> values;
    double anchor_time = 0.0;
    std::optional<double> decay_mu;
    double convergence_estimate = 0.0;  // sup |U_T - U_{T/2}|
    bool monotone_in_T = true;
    double T = 0.0;

    Field field() const { return Field{grid, values, anchor_time}; }
    /// sup |U / e^{-mu x} - 1| over the right quarter of the grid.
    double tail_deviation() const;
};

/// Moving-frame run from super_profile at t0 - T to t0; left Dirichlet 1,
/// right exponential tail with rate mu.
WaveProfile pullback_profile(double mu, const CoefficientPath& path, double t0, double T, const Grid1D& grid,
                             const SolverConfig& cfg);

/// Doubles T from T_init until the T versus T/2 distance is <= tol or T exceeds T_cap.
WaveProfile pullback_until_converged(double mu, const CoefficientPath& path, double t0, double T_init,
                                     double T_cap, const Grid1D& grid, const SolverConfig& cfg, double tol = 1e-3);

struct CriticalFront {
    WaveProfile profile;
    FrontTrack track;
};

/// Heaviside datum (1 for x <= 0) evolved in the fixed frame from t0 - T to t0.
/// The terminal profile is resampled on nodes k*dx around its half-level
/// crossing, which moves to x = 0.
CriticalFront critical_front_profile(const CoefficientPath& path, double t0, double T, const Grid1D& grid,
                                     const SolverConfig& cfg, double sample_dt = 0.1);

/// Linear interpolation of field at x + shift on nodes k*dx inside the shifted support.
Field recenter(const Field& field, double shift);

/// A run that records level crossings in fixed coordinates as it goes.
struct TrackedRun {
    Field final;
    std::vector<FrontTrack> tracks;
    double lost_time = 0.0;  // NaN when no level was lost
};

/// Distance from the right end at which a tracked level counts as lost. The
/// leading edge of a front spans a few length units and a Dirichlet end bends
/// it well before the half level arrives.
inline double front_exit_margin(const Grid1D& grid) { return std::max(5.0, 5.0 * grid.dx()); }

/// Evolves u0 to t_end, sampling crossings every sample_dt. With mu set the run
/// uses the scheme-consistent moving frame for that mu and positions are
/// reported in fixed coordinates.
TrackedRun tracked_run(const Field& u0, const CoefficientPath& path, std::optional<double> mu,
                       const BoundaryCondition& bc, const SolverConfig& cfg, double t_end,
                       std::span<const double> levels, double sample_dt, double exit_margin);

struct StabilityOptions {
    double mu = 0.5;
    double t0 = 0.0;
    double T_pull = 60.0;
    double T = 80.0;
    double amplitude = 0.4;
    double width = 4.0;
    double sample_dt = 1.0;
    double tail_cutoff = 1e-8;
};

/// Builds U by pullback to t0, perturbs it as u0 = min(1, U * (1 + amplitude * bump))
/// with a cos^2 bump centered at the half level, and evolves both in the same
/// moving frame, recording alpha(t).
StabilityMetric run_stability(const CoefficientPath& path, const Grid1D& grid, const SolverConfig& cfg,
                              const StabilityOptions& opt);

}  // namespace kpp
