#include "ppgsleep/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ppgsleep/beat_detect.hpp"
#include "ppgsleep/cardio.hpp"
#include "ppgsleep/hrv_resp.hpp"
#include "ppgsleep/motion.hpp"

namespace ppgsleep {
namespace pipeline {

std::vector<FeatureRecord> device_stage(const csv::Recording& rec, const Config& cfg) {
    const UniformSeries norm = motion::accel_norm(rec.acc_x, rec.acc_y, rec.acc_z);
    const UniformSeries hp = motion::remove_gravity(norm, cfg.gravity_window_s);
    const std::vector<motion::MotionWindow> powers =
        motion::motion_power(hp, cfg.motion_window_s);
    const motion::MotionMask mask = motion::motion_mask(powers, cfg.motion_threshold_g2);

    const UniformSeries& ppg =
        cfg.channel == PpgChannel::Green ? rec.ppg_green : rec.ppg_ir;
    const BeatSeries beats = beat_detect::detect_beats(ppg, mask, cfg.detector);
    const BBISeries bbi = beat_detect::beats_to_intervals(beats);

    const double t_begin = ppg.t0;
    const double t_end = ppg.t0 + ppg.duration();
    std::vector<FeatureRecord> records;
    std::size_t iv = 0, iw = 0;
    for (double epoch = t_begin; epoch < t_end; epoch += cfg.epoch_s) {
        FeatureRecord r;
        r.epoch_start = epoch;
        const double epoch_end = epoch + cfg.epoch_s;
        while (iw < powers.size() && powers[iw].start_s < epoch_end - 1e-9) {
            r.motion_powers.push_back(static_cast<float>(powers[iw].power));
            ++iw;
        }
        while (iv < bbi.size() && bbi.onset_s[iv] < epoch_end - 1e-9) {
            FeatureRecord::Interval packed;
            packed.onset_offset_ms = static_cast<std::uint32_t>(
                std::lround((bbi.onset_s[iv] - epoch) * 1000.0));
            packed.interval_ms = static_cast<std::uint16_t>(
                std::clamp<long>(std::lround(bbi.interval_ms[iv]), 1, 65535));
            r.intervals.push_back(packed);
            ++iv;
        }
        records.push_back(std::move(r));
    }
    return records;
}

ServerOutput server_stage(const std::vector<FeatureRecord>& records, const Config& cfg) {
    BBISeries bbi;
    std::vector<motion::MotionWindow> powers;
    for (const FeatureRecord& r : records) {
        for (std::size_t k = 0; k < r.motion_powers.size(); ++k) {
            motion::MotionWindow w;
            w.start_s = r.epoch_start + static_cast<double>(k) * cfg.motion_window_s;
            w.end_s = w.start_s + cfg.motion_window_s;
            w.power = r.motion_powers[k];
            powers.push_back(w);
        }
        for (const FeatureRecord::Interval& iv : r.intervals) {
            bbi.onset_s.push_back(r.epoch_start + iv.onset_offset_ms / 1000.0);
            bbi.interval_ms.push_back(static_cast<double>(iv.interval_ms));
            bbi.flags.push_back(BbiFlag::Valid);
        }
    }
    if (bbi.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "server_stage: too few intervals");
    }
    const motion::MotionMask mask = motion::motion_mask(powers, cfg.motion_threshold_g2);

    ServerOutput out;
    const BBISeries flagged = cardio::flag_intervals(bbi, mask, cfg.plausibility);
    out.corrected = cardio::correct_intervals(flagged, cfg.plausibility);
    out.hr = cardio::heart_rate(out.corrected, cfg.hr_window_beats);
    out.br = hrv_resp::breathing_pipeline(out.corrected, cfg.breathing);
    return out;
}

ServerOutput run_all(const csv::Recording& rec, const Config& cfg) {
    return server_stage(device_stage(rec, cfg), cfg);
}

} // namespace pipeline
} // namespace ppgsleep
