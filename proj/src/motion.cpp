#include "ppgsleep/motion.hpp"

#include <algorithm>
#include <cmath>

namespace ppgsleep {
namespace motion {

bool MotionMask::overlaps_corrupted(double t_start, double t_end) const {
    for (const auto& [s, e] : corrupted_segments) {
        if (t_start < e && t_end > s) return true;
    }
    return false;
}

UniformSeries accel_norm(const UniformSeries& x, const UniformSeries& y,
                         const UniformSeries& z) {
    if (x.size() != y.size() || x.size() != z.size() || x.fs != y.fs || x.fs != z.fs) {
        throw Error(ErrorCode::InvalidSeries, "accel_norm: axis length or fs mismatch");
    }
    UniformSeries out;
    out.fs = x.fs;
    out.t0 = x.t0;
    out.values.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        out.values[k] = std::sqrt(x.values[k] * x.values[k] +
                                  y.values[k] * y.values[k] +
                                  z.values[k] * z.values[k]);
    }
    return out;
}

UniformSeries remove_gravity(const UniformSeries& norm, double window_s) {
    const std::size_t n = norm.size();
    const std::size_t win = static_cast<std::size_t>(std::lround(window_s * norm.fs));
    if (n < win || win < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "remove_gravity: series shorter than the averaging window");
    }
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + norm.values[k];

    const std::size_t half = win / 2;
    UniformSeries out;
    out.fs = norm.fs;
    out.t0 = norm.t0;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(n, k + half + 1);
        const double mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
        out.values[k] = norm.values[k] - mean;
    }
    return out;
}

std::vector<MotionWindow> motion_power(const UniformSeries& hp, double window_s) {
    if (hp.values.empty()) {
        throw Error(ErrorCode::InsufficientData, "motion_power: empty series");
    }
    const std::size_t win = static_cast<std::size_t>(std::lround(window_s * hp.fs));
    if (win < 1) {
        throw Error(ErrorCode::InvalidParam, "motion_power: window shorter than one sample");
    }
    std::vector<MotionWindow> out;
    for (std::size_t start = 0; start + win <= hp.size(); start += win) {
        double acc = 0.0;
        for (std::size_t k = start; k < start + win; ++k) {
            acc += hp.values[k] * hp.values[k];
        }
        MotionWindow w;
        w.start_s = hp.t0 + static_cast<double>(start) / hp.fs;
        w.end_s = hp.t0 + static_cast<double>(start + win) / hp.fs;
        w.power = acc / static_cast<double>(win);
        out.push_back(w);
    }
    return out;
}

MotionMask motion_mask(std::vector<MotionWindow> powers, double threshold_g2) {
    if (threshold_g2 < 0.0) {
        throw Error(ErrorCode::InvalidParam, "motion_mask: threshold must be >= 0");
    }
    MotionMask mask;
    for (MotionWindow& w : powers) w.corrupted = w.power > threshold_g2;
    mask.windows = std::move(powers);

    for (const MotionWindow& w : mask.windows) {
        if (!w.corrupted) continue;
        if (!mask.corrupted_segments.empty() &&
            mask.corrupted_segments.back().second >= w.start_s - 1e-9) {
            mask.corrupted_segments.back().second = w.end_s;
        } else {
            mask.corrupted_segments.emplace_back(w.start_s, w.end_s);
        }
    }
    return mask;
}

} // namespace motion
} // namespace ppgsleep
