#pragma once

#include <vector>

#include "ppgsleep/core.hpp"
#include "ppgsleep/motion.hpp"

namespace ppgsleep {
namespace beat_detect {

struct DetectorConfig {
    double refractory_s = 0.3;
    // A candidate maximum must exceed floor_ratio x the running median of
    // the last floor_history accepted maxima amplitudes.
    double floor_ratio = 0.3;
    std::size_t floor_history = 8;
    // Centered moving-average width (samples, odd) applied to the
    // derivative before peak picking; 1 disables smoothing.
    std::size_t derivative_smooth = 5;
};

/// First difference scaled by fs. Output length n-1, time base shifted
/// by half a sample.
UniformSeries derivative(const UniformSeries& ppg);

/// Local maxima of the derivative above an adaptive amplitude floor,
/// with refractory rejection. When two candidates fall within the
/// refractory period the larger one wins (ties: earlier index).
std::vector<std::size_t> detect_maxima(const UniformSeries& deriv,
                                       double refractory_s = 0.3,
                                       double floor_ratio = 0.3,
                                       std::size_t floor_history = 8);

/// Vertex time of the parabola through samples k-1, k, k+1.
/// The sub-sample offset is clamped to [-0.5, +0.5]; a flat triple
/// yields offset 0.
double refine_peak_parabolic(const UniformSeries& series, std::size_t k);

/// Full detector: derivative -> optional smoothing -> maxima ->
/// parabolic refinement. Beats inside corrupted mask segments are still
/// emitted; downstream interval flagging decides their fate.
BeatSeries detect_beats(const UniformSeries& ppg, const motion::MotionMask& mask,
                        const DetectorConfig& cfg = {});

/// Consecutive beat differences in ms, onset at the earlier beat.
BBISeries beats_to_intervals(const BeatSeries& beats);

} // namespace beat_detect
} // namespace ppgsleep
