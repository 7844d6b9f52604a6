#pragma once

#include <string>

#include "ppgsleep/beat_detect.hpp"
#include "ppgsleep/cardio.hpp"
#include "ppgsleep/hrv_resp.hpp"

namespace ppgsleep {

enum class PpgChannel { Green, Ir };

/// Every tunable of the pipeline, with the defaults documented per
/// module. Loadable from a key=value text file.
struct Config {
    PpgChannel channel = PpgChannel::Green;

    // motion
    double gravity_window_s = 2.0;
    double motion_window_s = 1.0;
    double motion_threshold_g2 = 0.01;

    // beat detection
    beat_detect::DetectorConfig detector;

    // interval plausibility / correction
    cardio::PlausibilityConfig plausibility;
    std::size_t hr_window_beats = 10;

    // breathing estimation
    hrv_resp::BreathingConfig breathing;

    // device payload
    double epoch_s = 60.0;

    static Config load(const std::string& path);
};

} // namespace ppgsleep
