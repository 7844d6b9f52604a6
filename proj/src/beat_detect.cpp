#include "ppgsleep/beat_detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ppgsleep {
namespace beat_detect {

UniformSeries derivative(const UniformSeries& ppg) {
    if (ppg.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "derivative: need at least 2 samples");
    }
    UniformSeries out;
    out.fs = ppg.fs;
    out.t0 = ppg.t0 + 0.5 / ppg.fs;
    out.values.resize(ppg.size() - 1);
    for (std::size_t k = 0; k + 1 < ppg.size(); ++k) {
        out.values[k] = (ppg.values[k + 1] - ppg.values[k]) * ppg.fs;
    }
    return out;
}

namespace {

double median_of(std::deque<double> vals) {
    std::vector<double> v(vals.begin(), vals.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = (m + *std::max_element(v.begin(), v.begin() + mid)) / 2.0;
    }
    return m;
}

UniformSeries smooth_centered(const UniformSeries& x, std::size_t width) {
    if (width <= 1) return x;
    const std::size_t half = width / 2;
    UniformSeries out = x;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(x.size(), k + half + 1);
        double acc = 0.0;
        for (std::size_t j = lo; j < hi; ++j) acc += x.values[j];
        out.values[k] = acc / static_cast<double>(hi - lo);
    }
    return out;
}

} // namespace

std::vector<std::size_t> detect_maxima(const UniformSeries& deriv, double refractory_s,
                                       double floor_ratio, std::size_t floor_history) {
    if (!(refractory_s > 0.0)) {
        throw Error(ErrorCode::InvalidParam, "detect_maxima: refractory must be > 0");
    }
    std::vector<std::size_t> accepted;
    std::deque<double> recent_amps;
    const double refractory_samples = refractory_s * deriv.fs;
    const auto& d = deriv.values;

    for (std::size_t k = 1; k + 1 < d.size(); ++k) {
        if (!(d[k] > d[k - 1] && d[k] >= d[k + 1])) continue;
        const double amp = d[k];
        if (amp <= 0.0) continue;
        if (recent_amps.size() >= floor_history &&
            amp <= floor_ratio * median_of(recent_amps)) {
            continue;
        }
        if (!accepted.empty() &&
            static_cast<double>(k - accepted.back()) < refractory_samples) {
            // Conflict inside the refractory period: keep the larger one.
            if (amp > d[accepted.back()]) {
                accepted.back() = k;
                recent_amps.back() = amp;
            }
            continue;
        }
        accepted.push_back(k);
        recent_amps.push_back(amp);
        if (recent_amps.size() > floor_history) recent_amps.pop_front();
    }
    return accepted;
}

double refine_peak_parabolic(const UniformSeries& series, std::size_t k) {
    if (k < 1 || k + 1 >= series.size()) {
        throw Error(ErrorCode::BoundaryIndex,
                    "refine_peak_parabolic: index has no two neighbors");
    }
    const double ym = series.values[k - 1];
    const double y0 = series.values[k];
    const double yp = series.values[k + 1];
    const double denom = 2.0 * (ym - 2.0 * y0 + yp);
    double delta = 0.0;
    if (denom != 0.0) {
        delta = (ym - yp) / denom;
        delta = std::clamp(delta, -0.5, 0.5);
    }
    return series.t0 + (static_cast<double>(k) + delta) / series.fs;
}

BeatSeries detect_beats(const UniformSeries& ppg, const motion::MotionMask& mask,
                        const DetectorConfig& cfg) {
    (void)mask;  // beats under motion are flagged downstream, not suppressed here
    if (ppg.duration() < 2.0) {
        throw Error(ErrorCode::InsufficientData, "detect_beats: need >= 2 s of PPG");
    }
    const UniformSeries deriv = derivative(ppg);
    const UniformSeries smoothed = smooth_centered(deriv, cfg.derivative_smooth);
    const std::vector<std::size_t> maxima =
        detect_maxima(smoothed, cfg.refractory_s, cfg.floor_ratio, cfg.floor_history);

    BeatSeries beats;
    const std::size_t relocal = cfg.derivative_smooth / 2;
    for (std::size_t k : maxima) {
        // The smoothed series locates the beat robustly but its window can
        // reach past the systolic rise and bias the maximum; re-localize on
        // the raw derivative before refining.
        std::size_t kr = k;
        const std::size_t lo = k >= relocal ? k - relocal : 0;
        const std::size_t hi = std::min(deriv.size() - 1, k + relocal);
        for (std::size_t j = lo; j <= hi; ++j) {
            if (deriv.values[j] > deriv.values[kr]) kr = j;
        }
        double t;
        if (kr >= 1 && kr + 1 < deriv.size()) {
            t = refine_peak_parabolic(deriv, kr);
        } else {
            t = deriv.time_at(kr);
        }
        // Refinement can move a beat by up to half a sample; re-enforce the
        // refractory spacing on the refined times.
        if (!beats.times.empty() && t - beats.times.back() < cfg.refractory_s) continue;
        beats.times.push_back(t);
    }
    return beats;
}

BBISeries beats_to_intervals(const BeatSeries& beats) {
    if (beats.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "beats_to_intervals: need >= 2 beats");
    }
    BBISeries out;
    out.onset_s.resize(beats.size() - 1);
    out.interval_ms.resize(beats.size() - 1);
    out.flags.assign(beats.size() - 1, BbiFlag::Valid);
    for (std::size_t k = 0; k + 1 < beats.size(); ++k) {
        out.onset_s[k] = beats.times[k];
        out.interval_ms[k] = (beats.times[k + 1] - beats.times[k]) * 1000.0;
    }
    return out;
}

} // namespace beat_detect
} // namespace ppgsleep
