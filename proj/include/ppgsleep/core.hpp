#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ppgsleep/errors.hpp"

namespace ppgsleep {

/// Uniformly sampled signal. Sample k lives at t0 + k/fs.
struct UniformSeries {
    std::vector<double> values;
    double fs = 0.0;  // Hz
    double t0 = 0.0;  // s

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) / fs; }
    double duration() const {
        return values.empty() ? 0.0 : static_cast<double>(values.size() - 1) / fs;
    }
};

/// A (time, value) sample of a non-uniform series.
struct SamplePoint {
    double t = 0.0;
    double value = 0.0;
};

/// Strictly increasing beat timestamps, fractional-sample resolution.
struct BeatSeries {
    std::vector<double> times;  // s

    std::size_t size() const { return times.size(); }
};

enum class BbiFlag : std::uint8_t {
    Valid = 0,
    Implausible = 1,
    Motion = 2,
    Interpolated = 3,
};

/// Beat-to-beat intervals with per-interval quality flags.
/// interval_ms[k] spans [onset_s[k], onset_s[k] + interval_ms[k]/1000).
struct BBISeries {
    std::vector<double> onset_s;
    std::vector<double> interval_ms;
    std::vector<BbiFlag> flags;
    // Time spans where long runs of corrected intervals make the values
    // low-confidence; filled by cardio::correct_intervals.
    std::vector<std::pair<double, double>> low_confidence;

    std::size_t size() const { return interval_ms.size(); }
};

/// One epoch of the device->server payload.
struct FeatureRecord {
    struct Interval {
        std::uint32_t onset_offset_ms = 0;  // relative to epoch_start
        std::uint16_t interval_ms = 0;

        bool operator==(const Interval&) const = default;
    };

    double epoch_start = 0.0;                 // s
    std::vector<float> motion_powers;         // g^2, one per motion window
    std::vector<Interval> intervals;

    bool operator==(const FeatureRecord&) const = default;
};

/// Linear interpolation of a non-uniform series onto a uniform grid.
/// Requires >= 2 points, strictly increasing times, and
/// [t_start, t_end] inside the input's span.
UniformSeries resample_linear(const std::vector<SamplePoint>& points, double fs,
                              double t_start, double t_end);

/// Versioned little-endian feature stream (".ftr").
std::vector<std::uint8_t> encode_features(const std::vector<FeatureRecord>& records);
std::vector<FeatureRecord> decode_features(const std::vector<std::uint8_t>& bytes);

} // namespace ppgsleep
