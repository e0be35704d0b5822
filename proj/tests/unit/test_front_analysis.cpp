#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "environment.hpp"
#include "error.hpp"
#include "front_analysis.hpp"
#include "pde_solver.hpp"

using namespace kpp;

namespace {

Field front_at(const Grid1D& g, double t, double position) {
    return Field::from_function(g, t, [&](double x) { return 0.5 * (1.0 - std::tanh(x - position)); });
}

FrontTrack synthetic_track(const std::vector<std::pair<double, double>>& pieces, double dt) {
    // Piecewise-constant speeds: (duration, speed).
    FrontTrack tr;
    double t = 0.0, x = 0.0;
    tr.push(t, x);
    for (auto [duration, speed] : pieces) {
        const auto n = static_cast<int>(std::lround(duration / dt));
        for (int k = 0; k < n; ++k) {
            t += dt;
            x += speed * dt;
            tr.push(t, x);
        }
    }
    return tr;
}

}  // namespace

TEST(LevelCrossing, InterpolatesLinearly) {
    const Grid1D g = Grid1D::with_spacing(0.0, 10.0, 1.0);
    const Field f = Field::from_function(g, 0.0, [](double x) { return 1.0 - x / 10.0; });
    EXPECT_NEAR(level_crossing(f, 0.5), 5.0, 1e-12);
    EXPECT_NEAR(level_crossing(f, 0.25), 7.5, 1e-12);
    const Field rising = Field::from_function(g, 0.0, [](double x) { return x / 10.0; });
    EXPECT_NEAR(level_crossing(rising, 0.3, FrontSide::Left), 3.0, 1e-12);
}

TEST(LevelCrossing, FailsWithoutCrossingOrWhenAmbiguous) {
    const Grid1D g = Grid1D::with_spacing(0.0, 10.0, 0.1);
    const Field flat = Field::from_function(g, 0.0, [](double) { return 0.2; });
    EXPECT_THROW(level_crossing(flat, 0.5), Error);
    const Field wiggle = Field::from_function(g, 0.0, [](double x) {
        if (x < 4.0) return 1.0;
        if (x < 4.2) return 0.2;
        if (x < 4.3) return 0.9;
        return 0.0;
    });
    try {
        level_crossing(wiggle, 0.5);
        FAIL() << "expected an ambiguity error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Analysis);
    }
}

TEST(TrackFront, FollowsAMovingProfile) {
    const Grid1D g = Grid1D::with_spacing(-10.0, 90.0, 0.05);
    std::vector<Field> traj;
    for (int k = 0; k <= 30; ++k) traj.push_back(front_at(g, k, 2.5 * k));
    const FrontTrack tr = track_front(traj, 0.5);
    ASSERT_EQ(tr.size(), traj.size());
    for (std::size_t i = 0; i < tr.size(); ++i) EXPECT_NEAR(tr.positions[i], 2.5 * tr.times[i], 1e-3);
    const SpeedEstimate s = speed_estimate(tr, 5.0, 0.0);
    EXPECT_NEAR(s.average, 2.5, 1e-4);
    EXPECT_NEAR(s.least_mean, 2.5, 1e-3);
    EXPECT_NEAR(s.largest_mean, 2.5, 1e-3);
}

TEST(SpeedEstimate, LeastAndLargestMeansOfAlternatingSpeeds) {
    // Alternating 1 and 3 on unit-length pieces: windows of length >= 10 see means in [1.9, 2.1].
    std::vector<std::pair<double, double>> pieces;
    for (int k = 0; k < 60; ++k) pieces.emplace_back(1.0, k % 2 == 0 ? 1.0 : 3.0);
    const FrontTrack alternating = synthetic_track(pieces, 0.01);
    const SpeedEstimate s = speed_estimate(alternating, 10.0, 0.0);
    EXPECT_NEAR(s.average, 2.0, 0.02);
    EXPECT_GE(s.least_mean, 1.9 - 1e-9);
    EXPECT_LE(s.largest_mean, 2.1 + 1e-9);
    EXPECT_LE(s.least_mean, s.average);
    EXPECT_GE(s.largest_mean, s.average);

    // Long slow then long fast stretch: the extremes are the two speeds.
    const FrontTrack two = synthetic_track({{30.0, 1.0}, {30.0, 3.0}}, 0.01);
    const SpeedEstimate t = speed_estimate(two, 10.0, 0.0);
    EXPECT_NEAR(t.least_mean, 1.0, 1e-6);
    EXPECT_NEAR(t.largest_mean, 3.0, 1e-6);
    // Burn-in discards the slow part.
    const SpeedEstimate late = speed_estimate(two, 10.0, 30.0);
    EXPECT_NEAR(late.average, 3.0, 1e-6);
    EXPECT_NEAR(late.least_mean, 3.0, 1e-6);
}

TEST(SpeedEstimate, RejectsTooShortTracks) {
    const FrontTrack tr = synthetic_track({{5.0, 2.0}}, 0.1);
    EXPECT_THROW(speed_estimate(tr, 10.0, 0.0), Error);
    EXPECT_THROW(speed_estimate(tr, 1.0, 4.95), Error);
}

TEST(SpreadingInterval, CombinesLevels) {
    std::vector<FrontTrack> tracks{synthetic_track({{40.0, 2.2}}, 0.1), synthetic_track({{40.0, 1.9}}, 0.1)};
    tracks[0].level = 0.1;
    tracks[1].level = 0.9;
    const SpreadingInterval si = spreading_interval(std::span<const FrontTrack>(tracks), 5.0, 0.0);
    EXPECT_NEAR(si.c_inf, 1.9, 1e-9);
    EXPECT_NEAR(si.c_sup, 2.2, 1e-9);
    EXPECT_LE(si.c_inf, si.c_sup);
    ASSERT_EQ(si.per_level.size(), 2u);
}

TEST(StabilityAlpha, RatioOnTheSupport) {
    const Grid1D g = Grid1D::with_spacing(0.0, 40.0, 0.1);
    const Field U = Field::from_function(g, 0.0, [](double x) { return std::exp(-x); });
    const Field same = U;
    EXPECT_DOUBLE_EQ(stability_alpha(same, U, 1e-8), 1.0);
    const Field up = Field::from_function(g, 0.0, [](double x) { return 1.3 * std::exp(-x); });
    EXPECT_NEAR(stability_alpha(up, U, 1e-8), 1.3, 1e-12);
    const Field down = Field::from_function(g, 0.0, [](double x) { return std::exp(-x) / 1.6; });
    EXPECT_NEAR(stability_alpha(down, U, 1e-8), 1.6, 1e-12);
    // A large relative error below the cutoff is ignored.
    const Field tail = Field::from_function(g, 0.0, [](double x) { return x > 30.0 ? 5.0 * std::exp(-x) : std::exp(-x); });
    EXPECT_DOUBLE_EQ(stability_alpha(tail, U, 1e-8), 1.0);
}

TEST(Cocycle, IdentityHoldsOnEveryFamily) {
    const std::vector<EnvironmentSpec> specs{ConstantEnv{1.2}, PeriodicEnv{1.0, 0.5, 1.0, 0.1},
                                             PiecewiseH2Env{12, SpikeProfile::TentLinear},
                                             BoundedNoiseEnv{1.0, 1.0, 0.5, 9},
                                             TabulatedEnv{{0.0, 50.0, 100.0, 200.0}, {1.0, 3.0, 0.5, 1.5}}};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& spec : specs) {
        const CoefficientPath p = sample_path(spec, 0.0, 200.0, 0.01, 0);
        for (int k = 0; k < 100; ++k) {
            const double t = 200.0 * unit(rng);
            const double s = (200.0 - t) * unit(rng);
            EXPECT_LE(std::abs(cocycle_residual(p, 0.7, s, t)), 1e-8) << kind_name(spec);
        }
        EXPECT_TRUE(cocycle_check(p, 0.7, 10.0, 20.0, 1e-8));
    }
}

TEST(FrontRecorder, StopsAtTheExitMargin) {
    const Grid1D g = Grid1D::with_spacing(0.0, 20.0, 0.05);
    FrontRecorder rec({0.5}, FrontSide::Right, 2.0);
    // The front passes x_max - margin = 18 between k = 8 and k = 9.
    for (int k = 0; k <= 10; ++k) rec.record(front_at(g, k, 2.0 * k + 0.5));
    EXPECT_FALSE(rec.all_active());
    EXPECT_DOUBLE_EQ(rec.lost_time(), 9.0);
    EXPECT_EQ(rec.tracks().front().size(), 9u);
    FrontRecorder shifted({0.5});
    shifted.record(front_at(g, 0.0, 5.0), 100.0);
    EXPECT_NEAR(shifted.tracks().front().positions.front(), 105.0, 1e-3);
    EXPECT_TRUE(std::isnan(shifted.lost_time()));
}
