#include "ppgsleep/hrv_resp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace ppgsleep {
namespace hrv_resp {

namespace {

struct Biquad {
    double b0, b1, b2, a1, a2;

    void filter_in_place(std::vector<double>& x) const {
        double z1 = 0.0, z2 = 0.0;
        for (double& v : x) {
            const double y = b0 * v + z1;
            z1 = b1 * v - a1 * y + z2;
            z2 = b2 * v - a2 * y;
            v = y;
        }
    }
};

// Bilinear-transform Butterworth sections, Q = 1/sqrt(2).
Biquad butter_lp2(double fc, double fs) {
    const double w = std::tan(std::numbers::pi * fc / fs);
    const double q = std::numbers::sqrt2;
    const double norm = 1.0 / (1.0 + q * w + w * w);
    Biquad s{};
    s.b0 = w * w * norm;
    s.b1 = 2.0 * s.b0;
    s.b2 = s.b0;
    s.a1 = 2.0 * (w * w - 1.0) * norm;
    s.a2 = (1.0 - q * w + w * w) * norm;
    return s;
}

Biquad butter_hp2(double fc, double fs) {
    const double w = std::tan(std::numbers::pi * fc / fs);
    const double q = std::numbers::sqrt2;
    const double norm = 1.0 / (1.0 + q * w + w * w);
    Biquad s{};
    s.b0 = norm;
    s.b1 = -2.0 * norm;
    s.b2 = norm;
    s.a1 = 2.0 * (w * w - 1.0) * norm;
    s.a2 = (1.0 - q * w + w * w) * norm;
    return s;
}

// Design cutoffs sit outside the nominal 0.04-0.5 Hz band so that the
// double (forward-backward) pass stays under 3 dB at the band edges.
constexpr double kHpCutoffHz = 0.025;
constexpr double kLpCutoffHz = 0.6;

std::vector<double> odd_extend(const std::vector<double>& x, std::size_t pad) {
    std::vector<double> y;
    y.reserve(x.size() + 2 * pad);
    for (std::size_t k = pad; k >= 1; --k) y.push_back(2.0 * x.front() - x[k]);
    y.insert(y.end(), x.begin(), x.end());
    const std::size_t n = x.size();
    for (std::size_t k = 1; k <= pad; ++k) y.push_back(2.0 * x.back() - x[n - 1 - k]);
    return y;
}

} // namespace

UniformSeries bandpass_hrv(const UniformSeries& series) {
    if (std::abs(series.fs - 2.0) > 1e-9) {
        throw Error(ErrorCode::InvalidSeries, "bandpass_hrv: expected fs = 2 Hz");
    }
    if (series.size() < 120) {
        throw Error(ErrorCode::InsufficientData, "bandpass_hrv: need >= 120 samples");
    }
    const Biquad hp = butter_hp2(kHpCutoffHz, series.fs);
    const Biquad lp = butter_lp2(kLpCutoffHz, series.fs);

    const std::size_t pad = std::min<std::size_t>(series.size() - 1, 120);
    std::vector<double> x = odd_extend(series.values, pad);

    hp.filter_in_place(x);
    lp.filter_in_place(x);
    std::reverse(x.begin(), x.end());
    hp.filter_in_place(x);
    lp.filter_in_place(x);
    std::reverse(x.begin(), x.end());

    UniformSeries out;
    out.fs = series.fs;
    out.t0 = series.t0;
    out.values.assign(x.begin() + pad, x.begin() + pad + series.size());
    return out;
}

double nlms_step(ArState& state, double sample) {
    if (!std::isfinite(sample)) {
        throw Error(ErrorCode::NonFiniteInput, "nlms_step: non-finite sample");
    }
    if (state.filled < kArOrder) {
        // Warm-up: fill the history without adapting.
        for (std::size_t k = kArOrder - 1; k >= 1; --k) state.history[k] = state.history[k - 1];
        state.history[0] = sample;
        ++state.filled;
        return 0.0;
    }
    double prediction = 0.0;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < kArOrder; ++k) {
        prediction += state.coeffs[k] * state.history[k];
        norm2 += state.history[k] * state.history[k];
    }
    const double error = sample - prediction;
    const double step = state.mu * error / (state.eps + norm2);
    for (std::size_t k = 0; k < kArOrder; ++k) state.coeffs[k] += step * state.history[k];
    for (std::size_t k = kArOrder - 1; k >= 1; --k) state.history[k] = state.history[k - 1];
    state.history[0] = sample;
    return error;
}

std::vector<double> ar_spectrum(const std::array<double, kArOrder>& coeffs,
                                const std::vector<double>& grid_hz, double fs) {
    std::vector<double> psd(grid_hz.size());
    for (std::size_t i = 0; i < grid_hz.size(); ++i) {
        const double f = grid_hz[i];
        if (f < -1e-12 || f > fs / 2.0 + 1e-12) {
            throw Error(ErrorCode::InvalidGrid, "ar_spectrum: frequency outside [0, fs/2]");
        }
        // A(f) = 1 - sum a_k z^-k evaluated via a complex recurrence.
        const double theta = -2.0 * std::numbers::pi * f / fs;
        const std::complex<double> z(std::cos(theta), std::sin(theta));
        std::complex<double> zk = 1.0;
        std::complex<double> a = 1.0;
        for (std::size_t k = 0; k < kArOrder; ++k) {
            zk *= z;
            a -= coeffs[k] * zk;
        }
        const double denom = std::norm(a);
        const double v = 1.0 / denom;
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidInput, "ar_spectrum: non-finite PSD value");
        }
        psd[i] = v;
    }
    return psd;
}

RespPeak track_respiratory_peak(const std::vector<double>& grid_hz,
                                const std::vector<double>& psd,
                                double band_lo_hz, double band_hi_hz,
                                double peak_halfwidth_hz) {
    if (grid_hz.size() != psd.size() || grid_hz.empty()) {
        throw Error(ErrorCode::InvalidGrid, "track_respiratory_peak: grid/psd mismatch");
    }
    std::size_t best = grid_hz.size();
    double p_band = 0.0;
    for (std::size_t i = 0; i < grid_hz.size(); ++i) {
        const double f = grid_hz[i];
        if (f < band_lo_hz - 1e-12 || f > band_hi_hz + 1e-12) continue;
        p_band += psd[i];
        if (best == grid_hz.size() || psd[i] > psd[best]) best = i;  // ties: lower f
    }
    if (best == grid_hz.size()) {
        throw Error(ErrorCode::InvalidGrid, "track_respiratory_peak: band not covered by grid");
    }

    double f_peak = grid_hz[best];
    if (best >= 1 && best + 1 < grid_hz.size()) {
        const double ym = psd[best - 1];
        const double y0 = psd[best];
        const double yp = psd[best + 1];
        const double denom = 2.0 * (ym - 2.0 * y0 + yp);
        if (denom != 0.0) {
            const double delta = std::clamp((ym - yp) / denom, -0.5, 0.5);
            f_peak += delta * (grid_hz[best + 1] - grid_hz[best]);
        }
    }

    double p_peak = 0.0;
    for (std::size_t i = 0; i < grid_hz.size(); ++i) {
        if (std::abs(grid_hz[i] - f_peak) <= peak_halfwidth_hz + 1e-12) p_peak += psd[i];
    }
    return {f_peak, p_peak, p_band};
}

BreathingState update_breathing_rate(BreathingState state, double f_peak_hz, double gain) {
    if (gain < 0.0 || gain > 1.0) {
        throw Error(ErrorCode::InvalidGain, "update_breathing_rate: gain outside [0, 1]");
    }
    state.rate_min += gain * (60.0 * f_peak_hz - state.rate_min);
    state.rate_min = std::clamp(state.rate_min, 6.0, 30.0);
    return state;
}

std::vector<SamplePoint> breathing_pipeline(const BBISeries& corrected,
                                            const BreathingConfig& cfg) {
    if (corrected.size() < 2 ||
        corrected.onset_s.back() - corrected.onset_s.front() < 300.0) {
        throw Error(ErrorCode::InsufficientData,
                    "breathing_pipeline: need >= 5 min of corrected intervals");
    }
    std::vector<SamplePoint> points(corrected.size());
    for (std::size_t k = 0; k < corrected.size(); ++k) {
        points[k] = {corrected.onset_s[k], corrected.interval_ms[k]};
    }
    const UniformSeries tachogram =
        resample_linear(points, 2.0, points.front().t, points.back().t);
    const UniformSeries filtered = bandpass_hrv(tachogram);

    std::vector<double> grid;
    for (double f = 0.0; f <= 1.0 + 1e-12; f += cfg.grid_step_hz) grid.push_back(f);

    ArState ar;
    ar.mu = cfg.mu;
    ar.eps = cfg.eps;
    BreathingState br;
    br.rate_min = cfg.initial_rate_min;
    br.band_lo_hz = cfg.band_lo_hz;
    br.band_hi_hz = cfg.band_hi_hz;

    std::vector<SamplePoint> out;
    const std::size_t eval_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::lround(cfg.spectrum_interval_s * filtered.fs)));
    for (std::size_t k = 0; k < filtered.size(); ++k) {
        nlms_step(ar, filtered.values[k]);
        if (k < kArOrder || (k + 1) % eval_every != 0) continue;
        const double t = filtered.time_at(k);
        if (t - filtered.t0 < cfg.warmup_s) continue;
        const std::vector<double> psd = ar_spectrum(ar.coeffs, grid, filtered.fs);
        const RespPeak peak = track_respiratory_peak(grid, psd, cfg.band_lo_hz,
                                                     cfg.band_hi_hz, cfg.peak_halfwidth_hz);
        const double gain =
            peak.p_band > 0.0 ? std::clamp(peak.p_peak / peak.p_band, 0.0, 1.0) : 0.0;
        br = update_breathing_rate(br, peak.f_peak_hz, gain);
        out.push_back({t, br.rate_min});
    }
    return out;
}

} // namespace hrv_resp
} // namespace ppgsleep
