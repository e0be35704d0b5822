#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "kppfronts/kppfronts.h"

TEST(CApi, VersionAndStatusNames) {
    EXPECT_STREQ(kpp_version(), "0.1.0");
    EXPECT_STREQ(kpp_status_name(KPP_OK), "ok");
    EXPECT_STREQ(kpp_status_name(KPP_ERR_CONFIG), "configuration error");
}

TEST(CApi, PathLifecycleAndQueries) {
    kpp_path* p = nullptr;
    ASSERT_EQ(kpp_path_periodic(1.0, 0.5, 1.0, 0.0, 0.0, 20.0, 0.01, &p), KPP_OK);
    double t0 = 0, dt = 0;
    size_t n = 0;
    ASSERT_EQ(kpp_path_info(p, &t0, &dt, &n), KPP_OK);
    EXPECT_DOUBLE_EQ(t0, 0.0);
    EXPECT_DOUBLE_EQ(dt, 0.01);
    EXPECT_EQ(n, 2001u);
    std::vector<double> values(n);
    ASSERT_EQ(kpp_path_values(p, values.data(), n), KPP_OK);
    double v = 0;
    ASSERT_EQ(kpp_path_eval(p, 0.25, &v), KPP_OK);
    EXPECT_NEAR(v, 1.5, 1e-12);
    EXPECT_DOUBLE_EQ(values[25], v);
    double integral = 0;
    ASSERT_EQ(kpp_path_integral(p, 0.0, 10.0, &integral), KPP_OK);
    EXPECT_NEAR(integral, 10.0, 1e-4);
    double lo = 0, hi = 0, hat = 0;
    ASSERT_EQ(kpp_mean_bounds(p, 5.0, &lo, &hi, &hat), KPP_OK);
    EXPECT_NEAR(hat, 1.0, 1e-3);
    double C = 0;
    ASSERT_EQ(kpp_speed_integral(p, 0.5, 10.0, &C), KPP_OK);
    EXPECT_NEAR(C, (0.25 * 10.0 + integral) / 0.5, 1e-9);
    double r = 1;
    ASSERT_EQ(kpp_cocycle_residual(p, 0.5, 3.0, 4.0, &r), KPP_OK);
    EXPECT_LE(std::abs(r), 1e-8);
    kpp_path_free(p);
    kpp_path_free(nullptr);
}

TEST(CApi, ErrorsCarryMessages) {
    kpp_path* p = reinterpret_cast<kpp_path*>(0x1);
    EXPECT_EQ(kpp_path_constant(-1.0, 0.0, 1.0, 0.1, &p), KPP_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(p, nullptr);
    EXPECT_GT(std::strlen(kpp_last_error()), 0u);
    EXPECT_EQ(kpp_path_eval(nullptr, 0.0, nullptr), KPP_ERR_INVALID_ARGUMENT);
    const double times[] = {0.0, 1.0};
    EXPECT_EQ(kpp_path_tabulated(times, nullptr, 2, 0.0, 1.0, 0.1, &p), KPP_ERR_INVALID_ARGUMENT);
    ASSERT_EQ(kpp_path_constant(1.0, 0.0, 1.0, 0.1, &p), KPP_OK);
    EXPECT_STREQ(kpp_last_error(), "");
    double v = 0;
    EXPECT_EQ(kpp_path_eval(p, 5.0, &v), KPP_ERR_INVALID_ARGUMENT);
    kpp_path_free(p);
    kpp_config* cfg = nullptr;
    EXPECT_EQ(kpp_config_parse("scenario = speed\n[grid]\nnope = 1\n", nullptr, &cfg), KPP_ERR_CONFIG);
    EXPECT_NE(std::string(kpp_last_error()).find("nope"), std::string::npos);
}

TEST(CApi, SamplesAndNoisePaths) {
    const double samples[] = {1.0, 2.0, 3.0};
    kpp_path* p = nullptr;
    ASSERT_EQ(kpp_path_from_samples(0.0, 0.5, samples, 3, &p), KPP_OK);
    double v = 0;
    ASSERT_EQ(kpp_path_eval(p, 0.75, &v), KPP_OK);
    EXPECT_DOUBLE_EQ(v, 2.5);
    kpp_path_free(p);
    kpp_path* a = nullptr;
    ASSERT_EQ(kpp_path_constant(1.0, -100.0, 1.0, 0.01, &a), KPP_OK);
    double Y = 0;
    ASSERT_EQ(kpp_random_equilibrium(a, 0.0, 50.0, 1e-3, &Y), KPP_OK);
    EXPECT_NEAR(Y, 1.0, 1e-9);
    EXPECT_EQ(kpp_random_equilibrium(a, 0.0, 10.0, 1e-3, &Y), KPP_ERR_INVALID_ARGUMENT);
    kpp_path_free(a);
    kpp_path* noise = nullptr;
    ASSERT_EQ(kpp_path_bounded_noise(1.0, 1.0, 0.5, 42, 0.0, 10.0, 0.01, &noise), KPP_OK);
    kpp_path* same = nullptr;
    ASSERT_EQ(kpp_path_bounded_noise(1.0, 1.0, 0.5, 42, 0.0, 10.0, 0.01, &same), KPP_OK);
    double x = 0, y = 0;
    kpp_path_eval(noise, 7.5, &x);
    kpp_path_eval(same, 7.5, &y);
    EXPECT_EQ(x, y);
    kpp_path_free(noise);
    kpp_path_free(same);
    kpp_path* h2 = nullptr;
    ASSERT_EQ(kpp_path_h2(12, 0, 0.0, 50.0, 0.001, &h2), KPP_OK);
    kpp_path_free(h2);
}

TEST(CApi, FrontsAndProfiles) {
    kpp_path* p = nullptr;
    ASSERT_EQ(kpp_path_constant(1.0, -60.0, 60.0, 0.01, &p), KPP_OK);
    const kpp_grid grid{-40.0, 60.0, 0.1};
    kpp_solver_options opts = kpp_solver_defaults();
    EXPECT_DOUBLE_EQ(opts.dt, 0.02);
    kpp_profile* U = nullptr;
    ASSERT_EQ(kpp_pullback_profile(p, 0.5, 0.0, 60.0, &grid, &opts, &U), KPP_OK);
    const size_t n = kpp_profile_size(U);
    EXPECT_EQ(n, 1001u);
    std::vector<double> x(n), u(n);
    ASSERT_EQ(kpp_profile_data(U, x.data(), u.data(), n), KPP_OK);
    EXPECT_DOUBLE_EQ(x.front(), -40.0);
    EXPECT_NEAR(u.front(), 1.0, 1e-9);
    double conv = 1;
    ASSERT_EQ(kpp_profile_convergence(U, &conv), KPP_OK);
    EXPECT_LT(conv, 1e-6);
    double half = 0;
    ASSERT_EQ(kpp_level_crossing(U, 0.5, &half), KPP_OK);
    double avg = 0;
    EXPECT_EQ(kpp_profile_speed(U, 10.0, 0.0, &avg, nullptr, nullptr), KPP_ERR_INVALID_ARGUMENT);
    kpp_profile_free(U);

    kpp_profile* crit = nullptr;
    const kpp_grid wide{-20.0, 160.0, 0.1};
    ASSERT_EQ(kpp_critical_front(p, 60.0, 60.0, &wide, &opts, 0.1, &crit), KPP_OK);
    ASSERT_EQ(kpp_level_crossing(crit, 0.5, &half), KPP_OK);
    EXPECT_NEAR(half, 0.0, 1e-9);
    double least = 0, largest = 0;
    ASSERT_EQ(kpp_profile_speed(crit, 10.0, 20.0, &avg, &least, &largest), KPP_OK);
    EXPECT_NEAR(avg, 2.0, 0.1);
    EXPECT_LE(least, largest);
    kpp_profile_free(crit);

    opts.advection = static_cast<kpp_advection>(7);
    EXPECT_EQ(kpp_pullback_profile(p, 0.5, 0.0, 60.0, &grid, &opts, &U), KPP_ERR_INVALID_ARGUMENT);
    kpp_path_free(p);
}

namespace {
void collect(const char* message, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(message); }
}  // namespace

TEST(CApi, WarningCallback) {
    std::vector<std::string> seen;
    kpp_set_warning_callback(collect, &seen);
    kpp_path* p = nullptr;
    ASSERT_EQ(kpp_path_constant(1.0, -20.0, 0.0, 0.01, &p), KPP_OK);
    // Centered advection on a coarse grid: cell Peclet number above one.
    kpp_solver_options opts = kpp_solver_defaults();
    opts.advection = KPP_ADVECTION_CENTERED;
    const kpp_grid coarse{-20.0, 40.0, 1.0};
    kpp_profile* U = nullptr;
    ASSERT_EQ(kpp_pullback_profile(p, 0.5, 0.0, 20.0, &coarse, &opts, &U), KPP_OK);
    kpp_profile_free(U);
    kpp_set_warning_callback(nullptr, nullptr);
    kpp_path_free(p);
    EXPECT_FALSE(seen.empty());
}

TEST(CApi, ConfigAndRun) {
    const auto dir = std::filesystem::temp_directory_path() / "kppfronts-capi-run";
    std::filesystem::remove_all(dir);
    kpp_config* cfg = nullptr;
    ASSERT_EQ(kpp_config_parse("scenario = env-stats\n[environment]\nkind = constant\na = 2\n", nullptr, &cfg), KPP_OK);
    ASSERT_EQ(kpp_config_set_seed(cfg, 9), KPP_OK);
    ASSERT_EQ(kpp_config_set_output_dir(cfg, dir.c_str()), KPP_OK);
    EXPECT_EQ(kpp_config_set_output_dir(cfg, ""), KPP_ERR_CONFIG);
    const std::string rendered = kpp_config_render(cfg);
    EXPECT_NE(rendered.find("seed = 9"), std::string::npos);
    kpp_report* report = nullptr;
    ASSERT_EQ(kpp_run(cfg, &report), KPP_OK);
    EXPECT_EQ(kpp_report_passed(report), 1);
    EXPECT_NE(std::string(kpp_report_text(report, 1)).find("check passed"), std::string::npos);
    EXPECT_EQ(std::string(kpp_report_text(report, 0)).find("check passed"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(kpp_report_manifest(report)));
    kpp_report_free(report);
    kpp_config_free(cfg);

    kpp_config* again = nullptr;
    ASSERT_EQ(kpp_config_load((dir / "manifest.json").c_str(), nullptr, &again), KPP_OK);
    EXPECT_EQ(std::string(kpp_config_render(again)), rendered);
    kpp_config_free(again);
}
