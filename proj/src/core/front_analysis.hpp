#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "environment.hpp"
#include "pde_solver.hpp"

namespace kpp {

/// Which crossing a tracker follows: the rightmost crossing from above (fronts
/// invading to the right) or the leftmost crossing from below.
enum class FrontSide { Right, Left };

struct FrontTrack {
    double level = 0.5;
    FrontSide side = FrontSide::Right;
    std::vector<double> times;
    std::vector<double> positions;

    std::size_t size() const noexcept { return times.size(); }
    void push(double t, double x);
};

struct SpeedEstimate {
    double average = 0.0;
    double least_mean = 0.0;
    double largest_mean = 0.0;
    double window_min = 0.0;
    double burn_in = 0.0;
    double fit_residual = 0.0;
};

struct SpreadingInterval {
    double c_inf = 0.0;
    double c_sup = 0.0;
    std::vector<double> levels;
    std::vector<SpeedEstimate> per_level;
};

struct StabilityMetric {
    std::vector<double> times;
    std::vector<double> alpha_values;
    double tail_cutoff = 1e-8;
};

/// Linear-interpolated crossing position. Throws Error(Analysis) when no
/// crossing exists or when another crossing lies within five cells.
double level_crossing(const Field& field, double level, FrontSide side = FrontSide::Right);

/// Crossings for each snapshot; stops at the first missing crossing with a warning.
FrontTrack track_front(std::span<const Field> traj, double level, FrontSide side = FrontSide::Right);

SpeedEstimate speed_estimate(const FrontTrack& track, double window_min, double burn_in);

SpreadingInterval spreading_interval(std::span<const Field> traj, std::span<const double> levels, double window_min,
                                     double burn_in, FrontSide side = FrontSide::Right);
SpreadingInterval spreading_interval(std::span<const FrontTrack> tracks, double window_min, double burn_in);

/// max(1, sup u/U, sup U/u) over {min(u, U) >= tail_cutoff}.
double stability_alpha(const Field& u, const Field& U_ref, double tail_cutoff);

/// C(t+s) - C(t) - C_t(s) for C(tau) = integral of (mu^2 + a)/mu from the path
/// origin; C_t integrates the path translated by t, summed cell by cell.
double cocycle_residual(const CoefficientPath& path, double mu, double s, double t);
bool cocycle_check(const CoefficientPath& path, double mu, double s, double t, double tol);

/// Follows several level sets while a run advances. A level whose crossing
/// disappears (or comes within exit_margin of the far boundary) stops recording.
class FrontRecorder {
public:
    FrontRecorder(std::vector<double> levels, FrontSide side = FrontSide::Right, double exit_margin = 0.0);

    /// position_offset is added to each crossing (frame displacement for moving frames).
    void record(const Field& field, double position_offset = 0.0);

    const std::vector<FrontTrack>& tracks() const noexcept { return tracks_; }
    bool all_active() const noexcept;
    /// Earliest time at which a level stopped recording, or NaN.
    double lost_time() const noexcept { return lost_time_; }

private:
    std::vector<FrontTrack> tracks_;
    std::vector<bool> active_;
    FrontSide side_;
    double exit_margin_;
    double lost_time_;
};

}  // namespace kpp
