#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

double logistic(double u0, double a, double t) {
    const double e = std::exp(a * t);
    return u0 * e / (1.0 - u0 + u0 * e);
}

double periodic_integral(double mean, double amplitude, double period, double phase, double s, double t) {
    const double k = 2.0 * std::numbers::pi / period;
    return mean * (t - s) - amplitude / k * (std::cos(k * t + phase) - std::cos(k * s + phase));
}

double h2_plateau_mean(int n) {
    double len = 0.0;
    double mass = 0.0;
    for (int k = 0; k < n; ++k) {
        const double value = k % 2 == 0 ? 1.0 : 2.0;
        len += k + 1;
        mass += value * (k + 1);
    }
    return mass / len;
}

double ShootingProfile::operator()(double at) const {
    if (at <= x.front()) return w.front();
    if (at >= x.back()) return w.back();
    const auto hi = std::upper_bound(x.begin(), x.end(), at);
    const auto j = static_cast<std::size_t>(hi - x.begin());
    const double f = (at - x[j - 1]) / (x[j] - x[j - 1]);
    return w[j - 1] + f * (w[j] - w[j - 1]);
}

ShootingProfile shooting_profile(double c, double eps, double step, double w_stop) {
    const double lambda = (-c + std::sqrt(c * c + 4.0)) / 2.0;
    // State (w, p = w').
    auto rhs = [c](double w, double p, double& dw, double& dp) {
        dw = p;
        dp = -c * p - w * (1.0 - w);
    };
    double w = 1.0 - eps;
    double p = -lambda * eps;
    double xpos = 0.0;
    ShootingProfile out;
    out.x.push_back(xpos);
    out.w.push_back(w);
    while (w > w_stop) {
        double k1w, k1p, k2w, k2p, k3w, k3p, k4w, k4p;
        rhs(w, p, k1w, k1p);
        rhs(w + 0.5 * step * k1w, p + 0.5 * step * k1p, k2w, k2p);
        rhs(w + 0.5 * step * k2w, p + 0.5 * step * k2p, k3w, k3p);
        rhs(w + step * k3w, p + step * k3p, k4w, k4p);
        w += step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        p += step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        xpos += step;
        out.x.push_back(xpos);
        out.w.push_back(w);
        if (out.x.size() > 10'000'000) throw std::runtime_error("shooting did not reach the tail");
    }
    // Shift so that the half level sits at x = 0.
    std::size_t j = 1;
    while (out.w[j] > 0.5) ++j;
    const double x_half = out.x[j - 1] + (out.w[j - 1] - 0.5) / (out.w[j - 1] - out.w[j]) * step;
    for (double& v : out.x) v -= x_half;
    return out;
}

}  // namespace oracle
