#pragma once

#include <vector>

#include "ppgsleep/config.hpp"
#include "ppgsleep/core.hpp"
#include "ppgsleep/csv.hpp"

namespace ppgsleep {
namespace pipeline {

/// Device stage: motion indicator + beat detection, packed into epoch
/// records. Interval values are quantized to whole milliseconds at this
/// boundary, exactly as the wire format carries them.
std::vector<FeatureRecord> device_stage(const csv::Recording& rec, const Config& cfg);

struct ServerOutput {
    BBISeries corrected;
    std::vector<SamplePoint> hr;  // bpm
    std::vector<SamplePoint> br;  // breaths/min
};

/// Server stage: rebuilds intervals and the motion mask from the feature
/// records, then runs correction, heart rate, and breathing estimation.
ServerOutput server_stage(const std::vector<FeatureRecord>& records, const Config& cfg);

/// device_stage + server_stage, in process.
ServerOutput run_all(const csv::Recording& rec, const Config& cfg);

} // namespace pipeline
} // namespace ppgsleep
