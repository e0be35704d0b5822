#include "front_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace kpp {

void FrontTrack::push(double t, double x) {
    if (!times.empty() && !(t > times.back())) fail(ErrorKind::InvalidArgument, "front track times must increase");
    times.push_back(t);
    positions.push_back(x);
}

double level_crossing(const Field& field, double level, FrontSide side) {
    const auto& u = field.values;
    const std::size_t n = u.size();
    const double dx = field.grid.dx();
    auto above = [&](std::size_t i) { return u[i] >= level; };
    auto ambiguous = [&](std::size_t lo, std::size_t hi, std::size_t skip) {
        for (std::size_t j = lo; j < hi; ++j)
            if (j != skip && above(j) != above(j + 1)) return true;
        return false;
    };

    if (side == FrontSide::Right) {
        for (std::size_t i = n - 1; i-- > 0;) {
            if (above(i) && !above(i + 1)) {
                if (ambiguous(i >= 5 ? i - 5 : 0, i, i)) {
                    std::ostringstream msg;
                    msg << "ambiguous level " << level << " crossing near x = " << field.grid.x(i) << " at t = " << field.time;
                    fail(ErrorKind::Analysis, msg.str());
                }
                return field.grid.x(i) + dx * (u[i] - level) / (u[i] - u[i + 1]);
            }
        }
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!above(i) && above(i + 1)) {
                if (ambiguous(i + 1, std::min(i + 6, n - 1), i)) {
                    std::ostringstream msg;
                    msg << "ambiguous level " << level << " crossing near x = " << field.grid.x(i) << " at t = " << field.time;
                    fail(ErrorKind::Analysis, msg.str());
                }
                return field.grid.x(i) + dx * (level - u[i]) / (u[i + 1] - u[i]);
            }
        }
    }
    std::ostringstream msg;
    msg << "no crossing of level " << level << " at t = " << field.time;
    fail(ErrorKind::Analysis, msg.str());
}

FrontTrack track_front(std::span<const Field> traj, double level, FrontSide side) {
    FrontTrack track{level, side, {}, {}};
    for (const Field& f : traj) {
        try {
            track.push(f.time, level_crossing(f, level, side));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Analysis) throw;
            warn("front track truncated: " + std::string(e.what()));
            break;
        }
    }
    return track;
}

SpeedEstimate speed_estimate(const FrontTrack& track, double window_min, double burn_in) {
    require(window_min > 0.0 && burn_in >= 0.0, "window_min must be positive and burn_in non-negative");
    if (track.size() < 3) fail(ErrorKind::Analysis, "front track too short for a speed estimate");
    const double t0 = track.times.front();
    const double duration = track.times.back() - t0;
    if (duration < burn_in + 2.0 * window_min - 1e-9) {
        std::ostringstream msg;
        msg << "front track duration " << duration << " shorter than burn_in + 2*window_min = "
            << burn_in + 2.0 * window_min;
        fail(ErrorKind::Analysis, msg.str());
    }
    const auto first = static_cast<std::size_t>(
        std::lower_bound(track.times.begin(), track.times.end(), t0 + burn_in - 1e-9) - track.times.begin());
    const std::size_t m = track.size() - first;
    std::span<const double> t(track.times.data() + first, m);
    std::span<const double> x(track.positions.data() + first, m);

    // Centered sums keep the fit well conditioned for large absolute times.
    double t_bar = 0.0;
    double x_bar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        t_bar += t[i];
        x_bar += x[i];
    }
    t_bar /= static_cast<double>(m);
    x_bar /= static_cast<double>(m);
    double stt = 0.0;
    double stx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        stt += (t[i] - t_bar) * (t[i] - t_bar);
        stx += (t[i] - t_bar) * (x[i] - x_bar);
    }
    SpeedEstimate out;
    out.window_min = window_min;
    out.burn_in = burn_in;
    out.average = stx / stt;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = x[i] - (x_bar + out.average * (t[i] - t_bar));
        ss += r * r;
    }
    out.fit_residual = std::sqrt(ss / static_cast<double>(m));

    const std::size_t stride = std::max<std::size_t>(1, (m + 1999) / 2000);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; i += stride) idx.push_back(i);
    if (idx.back() != m - 1) idx.push_back(m - 1);
    out.least_mean = std::numeric_limits<double>::infinity();
    out.largest_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < idx.size(); ++p) {
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
            const double span = t[idx[q]] - t[idx[p]];
            if (span < window_min - 1e-9) continue;
            const double v = (x[idx[q]] - x[idx[p]]) / span;
            out.least_mean = std::min(out.least_mean, v);
            out.largest_mean = std::max(out.largest_mean, v);
        }
    }
    if (!std::isfinite(out.least_mean)) fail(ErrorKind::Analysis, "no window of length window_min after burn_in");
    return out;
}

SpreadingInterval spreading_interval(std::span<const FrontTrack> tracks, double window_min, double burn_in) {
    require(!tracks.empty(), "spreading interval needs at least one level");
    SpreadingInterval out;
    std::vector<std::string> missing;
    for (const FrontTrack& tr : tracks) {
        const double duration = tr.size() >= 2 ? tr.times.back() - tr.times.front() : 0.0;
        if (tr.size() < 3 || duration < burn_in + 2.0 * window_min - 1e-9) {
            std::ostringstream s;
            s << tr.level;
            missing.push_back(s.str());
        }
    }
    if (!missing.empty()) {
        std::string msg = "level never attained long enough for a speed estimate:";
        for (const auto& m : missing) msg += " " + m;
        fail(ErrorKind::Analysis, msg);
    }
    std::size_t lowest = 0;
    std::size_t highest = 0;
    for (std::size_t k = 0; k < tracks.size(); ++k) {
        out.levels.push_back(tracks[k].level);
        out.per_level.push_back(speed_estimate(tracks[k], window_min, burn_in));
        if (tracks[k].level < tracks[lowest].level) lowest = k;
        if (tracks[k].level > tracks[highest].level) highest = k;
    }
    const double sign = tracks.front().side == FrontSide::Right ? 1.0 : -1.0;
    const SpeedEstimate& lo = out.per_level[lowest];
    const SpeedEstimate& hi = out.per_level[highest];
    // For a left-invading front the displacement is negative; flip to speeds.
    out.c_sup = sign > 0 ? lo.largest_mean : -lo.least_mean;
    out.c_inf = sign > 0 ? hi.least_mean : -hi.largest_mean;
    return out;
}

SpreadingInterval spreading_interval(std::span<const Field> traj, std::span<const double> levels, double window_min,
                                     double burn_in, FrontSide side) {
    std::vector<FrontTrack> tracks;
    for (double lv : levels) {
        require(lv > 0.0 && lv < 1.0, "levels must lie in (0, 1)");
        FrontTrack tr{lv, side, {}, {}};
        for (const Field& f : traj) {
            try {
                tr.push(f.time, level_crossing(f, lv, side));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Analysis) throw;
                // The level may not be reached yet at early times; keep only the
                // contiguous run of crossings from the first attained snapshot.
                if (tr.size() > 0) break;
            }
        }
        tracks.push_back(std::move(tr));
    }
    return spreading_interval(std::span<const FrontTrack>(tracks), window_min, burn_in);
}

double stability_alpha(const Field& u, const Field& U_ref, double tail_cutoff) {
    if (u.grid.nx != U_ref.grid.nx || u.grid.x_min != U_ref.grid.x_min || u.grid.x_max != U_ref.grid.x_max)
        fail(ErrorKind::InvalidArgument, "stability metric needs matching grids");
    double alpha = 1.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const double a = u.values[i];
        const double b = U_ref.values[i];
        if (std::min(a, b) < tail_cutoff) continue;
        ++count;
        alpha = std::max({alpha, a / b, b / a});
    }
    if (count == 0) fail(ErrorKind::Analysis, "stability metric evaluation region is empty");
    return alpha;
}

double cocycle_residual(const CoefficientPath& path, double mu, double s, double t) {
    require(mu > 0.0, "mu must be positive");
    require(s >= 0.0 && t >= 0.0, "cocycle offsets must be non-negative");
    std::vector<double> c(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) c[i] = (mu * mu + path[i]) / mu;
    const CoefficientPath speed(path.t_start(), path.dt(), std::move(c));
    const double o = speed.t_start();
    if (!speed.contains(o + t + s)) fail(ErrorKind::InvalidArgument, "cocycle window outside the sampled support");
    const double C_ts = speed.integral(o, o + t + s);
    const double C_t = speed.integral(o, o + t);
    const CoefficientPath moved = speed.shifted(t);
    const double C_shift = moved.integral_direct(o, o + s);
    return C_ts - C_t - C_shift;
}

bool cocycle_check(const CoefficientPath& path, double mu, double s, double t, double tol) {
    return std::abs(cocycle_residual(path, mu, s, t)) <= tol;
}

// ---------------------------------------------------------------------------

FrontRecorder::FrontRecorder(std::vector<double> levels, FrontSide side, double exit_margin)
    : side_(side), exit_margin_(exit_margin), lost_time_(std::numeric_limits<double>::quiet_NaN()) {
    for (double lv : levels) {
        require(lv > 0.0 && lv < 1.0, "tracked levels must lie in (0, 1)");
        tracks_.push_back(FrontTrack{lv, side, {}, {}});
        active_.push_back(true);
    }
}

bool FrontRecorder::all_active() const noexcept {
    return std::all_of(active_.begin(), active_.end(), [](bool b) { return b; });
}

void FrontRecorder::record(const Field& field, double position_offset) {
    for (std::size_t k = 0; k < tracks_.size(); ++k) {
        if (!active_[k]) continue;
        std::string reason;
        try {
            const double x = level_crossing(field, tracks_[k].level, side_);
            const bool exited = side_ == FrontSide::Right ? x > field.grid.x_max - exit_margin_
                                                          : x < field.grid.x_min + exit_margin_;
            if (!exited) {
                tracks_[k].push(field.time, x + position_offset);
                continue;
            }
            std::ostringstream msg;
            msg << "level " << tracks_[k].level << " front reached the domain edge at t = " << field.time;
            reason = msg.str();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Analysis) throw;
            reason = e.what();
        }
        active_[k] = false;
        if (std::isnan(lost_time_)) lost_time_ = field.time;
        warn("front track truncated: " + reason);
    }
}

}  // namespace kpp
