#include "environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "error.hpp"

namespace kpp {

namespace {

// Relative slack for evaluation points that round just outside the support.
constexpr double kSupportSlack = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

UniformSeries::UniformSeries(double t_start, double dt, std::vector<double> values)
    : t_start_(t_start), dt_(dt), values_(std::move(values)) {
    require(std::isfinite(t_start), "series start time must be finite");
    require(dt > 0.0 && std::isfinite(dt), "series time step must be positive");
    require(values_.size() >= 2, "series needs at least two samples");
    prefix_.resize(values_.size());
    prefix_[0] = 0.0;
    min_ = std::numeric_limits<double>::infinity();
    max_ = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        require(std::isfinite(values_[i]), "series values must be finite");
        min_ = std::min(min_, values_[i]);
        max_ = std::max(max_, values_[i]);
        if (i > 0) prefix_[i] = prefix_[i - 1] + 0.5 * dt_ * (values_[i - 1] + values_[i]);
    }
}

bool UniformSeries::contains(double t) const noexcept {
    const double slack = kSupportSlack * std::max(1.0, dt_);
    return t >= t_start_ - slack && t <= t_end() + slack;
}

std::size_t UniformSeries::cell_of(double t) const {
    const double pos = (t - t_start_) / dt_;
    if (pos <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(std::floor(pos));
    return std::min(i, values_.size() - 2);
}

double UniformSeries::operator()(double t) const {
    if (!contains(t)) {
        std::ostringstream msg;
        msg << "time " << t << " outside sampled support [" << t_start_ << ", " << t_end() << "]";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    const std::size_t i = cell_of(t);
    const double w = (t - time(i)) / dt_;
    return values_[i] + (values_[i + 1] - values_[i]) * w;
}

double UniformSeries::prefix_at(double t) const {
    const std::size_t i = cell_of(t);
    const double h = t - time(i);
    const double v = values_[i] + (values_[i + 1] - values_[i]) * (h / dt_);
    return prefix_[i] + 0.5 * h * (values_[i] + v);
}

double UniformSeries::integral(double s, double t) const {
    if (!contains(s) || !contains(t)) {
        std::ostringstream msg;
        msg << "integration window [" << s << ", " << t << "] outside sampled support [" << t_start_ << ", "
            << t_end() << "]";
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    return prefix_at(t) - prefix_at(s);
}

double UniformSeries::integral_direct(double s, double t) const {
    if (s > t) return -integral_direct(t, s);
    if (!contains(s) || !contains(t)) fail(ErrorKind::InvalidArgument, "integration window outside sampled support");
    double sum = 0.0;
    double lo = s;
    double f_lo = (*this)(s);
    std::size_t i = cell_of(s);
    while (true) {
        const double cell_end = time(i + 1);
        if (t <= cell_end || i + 2 >= values_.size()) {
            sum += 0.5 * (t - lo) * (f_lo + (*this)(t));
            break;
        }
        sum += 0.5 * (cell_end - lo) * (f_lo + values_[i + 1]);
        lo = cell_end;
        f_lo = values_[i + 1];
        ++i;
    }
    return sum;
}

CoefficientPath::CoefficientPath(double t_start, double dt, std::vector<double> values)
    : UniformSeries(t_start, dt, std::move(values)) {
    if (!(min_ > 0.0)) fail(ErrorKind::InvalidArgument, "coefficient path must be strictly positive");
}

CoefficientPath CoefficientPath::shifted(double offset) const {
    return CoefficientPath(t_start_ - offset, dt_, values_);
}

// ---------------------------------------------------------------------------

void validate(const EnvironmentSpec& spec) {
    std::visit(Overloaded{
                   [](const ConstantEnv& e) { require(e.a > 0.0 && std::isfinite(e.a), "constant a must be positive"); },
                   [](const PeriodicEnv& e) {
                       require(e.period > 0.0, "periodic environment needs a positive period");
                       if (!(e.mean - std::abs(e.amplitude) > 0.0))
                           fail(ErrorKind::InvalidArgument, "periodic environment needs mean - |amplitude| > 0");
                   },
                   [](const PiecewiseH2Env& e) { require(e.n_max >= 0, "n_max must be non-negative"); },
                   [](const BoundedNoiseEnv& e) {
                       require(e.relaxation_time > 0.0, "relaxation_time must be positive");
                       require(e.volatility > 0.0, "volatility must be positive");
                       require(e.bound > 0.0 && e.bound < 1.0, "bound must lie in (0, 1)");
                   },
                   [](const TabulatedEnv& e) {
                       require(e.times.size() >= 2 && e.times.size() == e.values.size(),
                               "tabulated environment needs matching times/values with at least two rows");
                       for (std::size_t i = 1; i < e.times.size(); ++i)
                           require(e.times[i] > e.times[i - 1], "tabulated times must be strictly increasing");
                       for (double v : e.values) require(v > 0.0 && std::isfinite(v), "tabulated values must be positive");
                   },
               },
               spec);
}

std::string kind_name(const EnvironmentSpec& spec) {
    return std::visit(Overloaded{
                          [](const ConstantEnv&) { return std::string("constant"); },
                          [](const PeriodicEnv&) { return std::string("periodic"); },
                          [](const PiecewiseH2Env&) { return std::string("h2"); },
                          [](const BoundedNoiseEnv&) { return std::string("bounded_noise"); },
                          [](const TabulatedEnv&) { return std::string("tabulated"); },
                      },
                      spec);
}

std::vector<double> sample_ou(double relaxation_time, double volatility, std::size_t n, double dt,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double phi = std::exp(-dt / relaxation_time);
    const double stationary_var = 0.5 * volatility * volatility * relaxation_time;
    const double innovation_sd = std::sqrt(stationary_var * (1.0 - phi * phi));

    double z = 0.0;
    const auto warmup = static_cast<std::size_t>(std::ceil(10.0 * relaxation_time / dt));
    for (std::size_t k = 0; k < warmup; ++k) z = phi * z + innovation_sd * normal(rng);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) z = phi * z + innovation_sd * normal(rng);
        out[i] = z;
    }
    return out;
}

CoefficientPath sample_path(const EnvironmentSpec& spec, double t_start, double t_end, double dt_env,
                            std::uint64_t seed) {
    validate(spec);
    require(dt_env > 0.0 && std::isfinite(dt_env), "dt_env must be positive");
    require(t_end > t_start, "t_end must exceed t_start");
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt_env - 1e-9));
    const std::size_t n = std::max<std::size_t>(steps, 1) + 1;
    std::vector<double> values(n);
    auto t_at = [&](std::size_t i) { return t_start + dt_env * static_cast<double>(i); };

    std::visit(Overloaded{
                   [&](const ConstantEnv& e) { std::fill(values.begin(), values.end(), e.a); },
                   [&](const PeriodicEnv& e) {
                       for (std::size_t i = 0; i < n; ++i)
                           values[i] = e.mean + e.amplitude * std::sin(2.0 * std::numbers::pi * t_at(i) / e.period + e.phase);
                   },
                   [&](const PiecewiseH2Env& e) {
                       for (std::size_t i = 0; i < n; ++i) values[i] = eval_h2_example(t_at(i), e.n_max, e.profile);
                   },
                   [&](const BoundedNoiseEnv& e) {
                       const auto z = sample_ou(e.relaxation_time, e.volatility, n, dt_env, e.seed + seed);
                       for (std::size_t i = 0; i < n; ++i) values[i] = 1.0 + e.bound * std::tanh(z[i]);
                   },
                   [&](const TabulatedEnv& e) {
                       if (t_start < e.times.front() || t_at(n - 1) > e.times.back())
                           fail(ErrorKind::InvalidArgument, "tabulated environment does not cover the requested window");
                       for (std::size_t i = 0; i < n; ++i) {
                           const double t = t_at(i);
                           auto hi = std::upper_bound(e.times.begin(), e.times.end(), t);
                           if (hi == e.times.end()) {
                               values[i] = e.values.back();
                               continue;
                           }
                           if (hi == e.times.begin()) ++hi;
                           const auto j = static_cast<std::size_t>(hi - e.times.begin());
                           const double w = (t - e.times[j - 1]) / (e.times[j] - e.times[j - 1]);
                           values[i] = e.values[j - 1] + w * (e.values[j] - e.values[j - 1]);
                       }
                   },
               },
               spec);
    return CoefficientPath(t_start, dt_env, std::move(values));
}

// ---------------------------------------------------------------------------

H2Interval h2_interval(int n) {
    require(n >= 0, "spike index must be non-negative");
    double l = 0.0;
    for (int k = 0;; ++k) {
        const double L = l + std::ldexp(1.0, -2 * (k + 1));
        if (k == n) return {l, L};
        l = L + static_cast<double>(k + 1);
    }
}

double h2_plateau_value(int n) { return (n % 2 == 0) ? 1.0 : 2.0; }

double eval_h2_example(double t, int n_max, SpikeProfile profile) {
    t = std::abs(t);
    double l = 0.0;
    for (int n = 0;; ++n) {
        const double L = l + std::ldexp(1.0, -2 * (n + 1));
        const double next_l = L + static_cast<double>(n + 1);
        if (t <= L) {
            if (n == 0) return 1.0;
            // Continuity with the preceding plateau at l_n and the following one at L_n.
            const double left = h2_plateau_value(n - 1);
            const double right = h2_plateau_value(n);
            const double width = L - l;
            if (!(width > 0.0)) return left;
            const double tau = std::clamp((t - l) / width, 0.0, 1.0);
            if (n > n_max) return left + (right - left) * tau;
            const int k = n / 2;
            const double extremum = (n % 2 == 0) ? std::ldexp(1.0, k) : std::ldexp(1.0, -(k + 1));
            if (profile == SpikeProfile::TentLinear) {
                if (tau <= 0.5) return left + (extremum - left) * (2.0 * tau);
                return extremum + (right - extremum) * (2.0 * tau - 1.0);
            }
            if (tau <= 0.5) {
                const double s = std::sin(std::numbers::pi * tau);
                return left + (extremum - left) * s * s;
            }
            const double s = std::sin(std::numbers::pi * (tau - 0.5));
            return extremum + (right - extremum) * s * s;
        }
        if (t <= next_l) return h2_plateau_value(n);
        l = next_l;
    }
}

// ---------------------------------------------------------------------------

double running_mean(const CoefficientPath& path, double s, double t) {
    require(t > s, "running mean needs t > s");
    return path.integral(s, t) / (t - s);
}

std::vector<std::size_t> stride_indices(std::size_t n, double dt, double duration) {
    const double stride = std::max(dt, duration / 2000.0);
    const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(stride / dt - 1e-9)));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += k) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

MeanBounds estimate_mean_bounds(const CoefficientPath& path, double window_min) {
    require(window_min > 0.0, "window_min must be positive");
    if (path.duration() < 2.0 * window_min - 1e-12) {
        std::ostringstream msg;
        msg << "path duration " << path.duration() << " shorter than 2*window_min = " << 2.0 * window_min;
        fail(ErrorKind::InvalidArgument, msg.str());
    }
    const auto idx = stride_indices(path.size(), path.dt(), path.duration());
    MeanBounds out;
    out.window_min = window_min;
    out.a_hat = path.cumulative(path.size() - 1) / path.duration();
    out.a_lower = std::numeric_limits<double>::infinity();
    out.a_upper = -std::numeric_limits<double>::infinity();
    const double slack = 1e-9 * path.dt();
    for (std::size_t p = 0; p < idx.size(); ++p) {
        const double ts = path.time(idx[p]);
        const double cs = path.cumulative(idx[p]);
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
            const double span = path.time(idx[q]) - ts;
            if (span < window_min - slack) continue;
            const double m = (path.cumulative(idx[q]) - cs) / span;
            out.a_lower = std::min(out.a_lower, m);
            out.a_upper = std::max(out.a_upper, m);
        }
    }
    return out;
}

}  // namespace kpp
