#pragma once

#include <cstdint>
#include <vector>

#include "ppgsleep/core.hpp"

namespace ppgsleep {
namespace synth {

struct SynthTruth {
    BeatSeries beats;
    BBISeries true_bbi;
    std::vector<SamplePoint> true_br;  // breaths/min, 1 Hz
};

/// Piecewise-constant respiratory-frequency schedule; freq_hz applies
/// from t_start until the next entry.
struct RsaSegment {
    double t_start_s = 0.0;
    double freq_hz = 0.25;
};

/// Beats from integrating an instantaneous rate
/// r(t) = hr_base * (1 + rsa_depth * sin(theta(t))), theta' = 2 pi f(t);
/// a beat is emitted at every unit crossing of the integrated rate.
/// Optional Gaussian timing jitter driven by the seed.
SynthTruth gen_beat_times(double hr_base_bpm, double rsa_freq_hz, double rsa_depth,
                          double duration_s, std::uint64_t seed,
                          double jitter_std_s = 0.0);

SynthTruth gen_beat_times_schedule(double hr_base_bpm,
                                   const std::vector<RsaSegment>& schedule,
                                   double rsa_depth, double duration_s,
                                   std::uint64_t seed, double jitter_std_s = 0.0);

/// Pulse-template PPG: fast half-cosine rise (~0.15 s, steepest at the
/// beat time) and slow tapered exponential decay (~0.4 s), plus 0.05 Hz
/// baseline drift and white noise.
UniformSeries gen_ppg(const BeatSeries& beats, double fs, double noise_std,
                      double drift_amp, double duration_s, std::uint64_t seed);

struct MotionBurst {
    double start_s = 0.0;
    double end_s = 0.0;
    double amp_g = 0.0;
};

struct AccelTriple {
    UniformSeries x, y, z;
};

/// Gravity on z, white noise on all axes, band-limited random motion
/// during bursts.
AccelTriple gen_accel(double duration_s, double fs,
                      const std::vector<MotionBurst>& bursts, double noise_std_g,
                      std::uint64_t seed);

} // namespace synth
} // namespace ppgsleep
