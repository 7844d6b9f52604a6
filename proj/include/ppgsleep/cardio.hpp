#pragma once

#include <vector>

#include "ppgsleep/core.hpp"
#include "ppgsleep/motion.hpp"

namespace ppgsleep {
namespace cardio {

struct PlausibilityConfig {
    double min_ms = 300.0;
    double max_ms = 1500.0;
    double jump_frac = 0.3;        // vs running median of recent valid intervals
    std::size_t median_history = 9;
    double low_confidence_s = 10.0;  // corrected runs longer than this are low-confidence
};

/// Marks intervals overlapping corrupted motion segments as Motion and
/// physiologically implausible ones as Implausible.
BBISeries flag_intervals(const BBISeries& bbi, const motion::MotionMask& mask,
                         const PlausibilityConfig& cfg = {});

/// Replaces non-valid interval values by linear interpolation in
/// onset-time coordinates between the nearest valid neighbors. The
/// series is trimmed to its valid span; long corrected runs are recorded
/// as low-confidence segments.
BBISeries correct_intervals(const BBISeries& flagged, const PlausibilityConfig& cfg = {});

/// Mean inverse of n consecutive intervals per non-overlapping window,
/// in bpm, timestamped at the window center.
std::vector<SamplePoint> heart_rate(const BBISeries& corrected, std::size_t n = 10);

} // namespace cardio
} // namespace ppgsleep
