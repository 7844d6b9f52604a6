#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ppgsleep/core.hpp"

namespace ppgsleep {
namespace hrv_resp {

inline constexpr std::size_t kArOrder = 20;

/// AR(20) predictor state adapted by NLMS.
struct ArState {
    std::array<double, kArOrder> coeffs{};
    std::array<double, kArOrder> history{};  // history[0] = most recent sample
    double mu = 0.05;
    double eps = 1e-8;
    std::size_t filled = 0;  // warm-up fill level of the history
};

struct BreathingState {
    double rate_min = 15.0;           // breaths/min
    double band_lo_hz = 0.1;
    double band_hi_hz = 0.5;
};

struct RespPeak {
    double f_peak_hz = 0.0;
    double p_peak = 0.0;
    double p_band = 0.0;
};

struct BreathingConfig {
    double grid_step_hz = 0.002;
    double spectrum_interval_s = 1.0;
    double peak_halfwidth_hz = 0.02;
    double warmup_s = 60.0;
    double mu = 0.05;
    double eps = 1e-8;
    double band_lo_hz = 0.1;
    double band_hi_hz = 0.5;
    double initial_rate_min = 15.0;
};

/// Zero-phase band-pass covering 0.04-0.5 Hz at fs = 2 Hz: a cascade of
/// second-order Butterworth high- and low-pass sections applied
/// forward-backward with odd-symmetric edge extension.
UniformSeries bandpass_hrv(const UniformSeries& series);

/// One NLMS update. During warm-up the first kArOrder samples only fill
/// the history. Returns the prediction error.
double nlms_step(ArState& state, double sample);

/// All-pole spectrum 1 / |1 - sum_k a_k exp(-i 2 pi f k / fs)|^2 on the
/// given frequency grid (innovation variance omitted).
std::vector<double> ar_spectrum(const std::array<double, kArOrder>& coeffs,
                                const std::vector<double>& grid_hz, double fs = 2.0);

/// Grid argmax inside the respiratory band (ties toward lower frequency),
/// parabolic sub-grid refinement, and peak/band powers.
RespPeak track_respiratory_peak(const std::vector<double>& grid_hz,
                                const std::vector<double>& psd,
                                double band_lo_hz = 0.1, double band_hi_hz = 0.5,
                                double peak_halfwidth_hz = 0.02);

/// rate <- rate + g * (60 f_peak - rate), clamped to [6, 30] breaths/min.
BreathingState update_breathing_rate(BreathingState state, double f_peak_hz, double gain);

/// Full chain: 2 Hz resampling of corrected intervals, band-pass, NLMS
/// adaptation, periodic spectrum evaluation and peak tracking. Emits one
/// (time, breaths/min) sample per second after the warm-up.
std::vector<SamplePoint> breathing_pipeline(const BBISeries& corrected,
                                            const BreathingConfig& cfg = {});

} // namespace hrv_resp
} // namespace ppgsleep
