#include "ppgsleep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ppgsleep {
namespace synth {

namespace {

constexpr double kIntegrationDt = 0.002;  // s

double freq_at(const std::vector<RsaSegment>& schedule, double t) {
    double f = schedule.front().freq_hz;
    for (const RsaSegment& seg : schedule) {
        if (t >= seg.t_start_s) f = seg.freq_hz;
    }
    return f;
}

SynthTruth integrate_beats(double hr_base_bpm, const std::vector<RsaSegment>& schedule,
                           double rsa_depth, double duration_s, std::uint64_t seed,
                           double jitter_std_s) {
    if (hr_base_bpm < 40.0 || hr_base_bpm > 120.0) {
        throw Error(ErrorCode::InvalidParam, "gen_beat_times: hr_base outside [40, 120]");
    }
    if (rsa_depth < 0.0 || rsa_depth > 0.2) {
        throw Error(ErrorCode::InvalidParam, "gen_beat_times: rsa_depth outside [0, 0.2]");
    }
    for (const RsaSegment& seg : schedule) {
        if (seg.freq_hz < 0.1 || seg.freq_hz > 0.5) {
            throw Error(ErrorCode::InvalidParam, "gen_beat_times: rsa_freq outside [0.1, 0.5]");
        }
    }
    if (!(duration_s > 0.0)) {
        throw Error(ErrorCode::InvalidParam, "gen_beat_times: duration must be > 0");
    }

    SynthTruth out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, jitter_std_s > 0.0 ? jitter_std_s : 1.0);

    double theta = 0.0;       // RSA modulator phase
    double cycles = 0.0;      // integrated beats
    double next_unit = 1.0;
    double t = 0.0;
    double rate_prev = hr_base_bpm / 60.0;  // depth * sin(0) = 0 at t = 0
    // First beat at t = 0.
    out.beats.times.push_back(0.0);

    while (t < duration_s) {
        const double f = freq_at(schedule, t);
        const double theta_mid = theta + std::numbers::pi * f * kIntegrationDt;
        theta += 2.0 * std::numbers::pi * f * kIntegrationDt;
        const double rate_mid =
            hr_base_bpm / 60.0 * (1.0 + rsa_depth * std::sin(theta_mid));
        const double rate_next = hr_base_bpm / 60.0 * (1.0 + rsa_depth * std::sin(theta));
        // Simpson step for the cycle integral.
        const double d_cycles =
            kIntegrationDt / 6.0 * (rate_prev + 4.0 * rate_mid + rate_next);
        const double cycles_next = cycles + d_cycles;
        while (cycles_next >= next_unit) {
            const double frac = (next_unit - cycles) / d_cycles;
            double tb = t + frac * kIntegrationDt;
            if (jitter_std_s > 0.0) tb += jitter(rng);
            out.beats.times.push_back(tb);
            next_unit += 1.0;
        }
        cycles = cycles_next;
        rate_prev = rate_next;
        t += kIntegrationDt;
    }

    // Jitter can reorder or crowd beats; restore a strictly increasing
    // series with a minimal spacing.
    std::sort(out.beats.times.begin(), out.beats.times.end());
    std::vector<double> clean;
    for (double tb : out.beats.times) {
        if (!clean.empty() && tb - clean.back() < 0.3) continue;
        clean.push_back(tb);
    }
    out.beats.times = std::move(clean);

    if (out.beats.size() >= 2) {
        out.true_bbi.onset_s.resize(out.beats.size() - 1);
        out.true_bbi.interval_ms.resize(out.beats.size() - 1);
        out.true_bbi.flags.assign(out.beats.size() - 1, BbiFlag::Valid);
        for (std::size_t k = 0; k + 1 < out.beats.size(); ++k) {
            out.true_bbi.onset_s[k] = out.beats.times[k];
            out.true_bbi.interval_ms[k] =
                (out.beats.times[k + 1] - out.beats.times[k]) * 1000.0;
        }
    }
    for (double ts = 0.0; ts < duration_s; ts += 1.0) {
        out.true_br.push_back({ts, 60.0 * freq_at(schedule, ts)});
    }
    return out;
}

} // namespace

SynthTruth gen_beat_times(double hr_base_bpm, double rsa_freq_hz, double rsa_depth,
                          double duration_s, std::uint64_t seed, double jitter_std_s) {
    return integrate_beats(hr_base_bpm, {{0.0, rsa_freq_hz}}, rsa_depth, duration_s,
                           seed, jitter_std_s);
}

SynthTruth gen_beat_times_schedule(double hr_base_bpm,
                                   const std::vector<RsaSegment>& schedule,
                                   double rsa_depth, double duration_s,
                                   std::uint64_t seed, double jitter_std_s) {
    if (schedule.empty()) {
        throw Error(ErrorCode::InvalidParam, "gen_beat_times_schedule: empty schedule");
    }
    return integrate_beats(hr_base_bpm, schedule, rsa_depth, duration_s, seed,
                           jitter_std_s);
}

namespace {

constexpr double kRiseHalf = 0.075;   // s, half of the ~0.15 s systolic rise
constexpr double kDecayTau = 0.2;     // s
constexpr double kDecayEnd = 0.675;   // s after the beat time

double pulse_template(double tau) {
    if (tau < -kRiseHalf || tau > kDecayEnd) return 0.0;
    if (tau <= kRiseHalf) {
        // Half-cosine rise; steepest slope exactly at tau = 0.
        return 0.5 * (1.0 + std::sin(std::numbers::pi * tau / (2.0 * kRiseHalf)));
    }
    const double d = tau - kRiseHalf;
    const double span = kDecayEnd - kRiseHalf;
    const double taper = 0.5 * (1.0 + std::cos(std::numbers::pi * d / span));
    return std::exp(-d / kDecayTau) * taper;
}

} // namespace

UniformSeries gen_ppg(const BeatSeries& beats, double fs, double noise_std,
                      double drift_amp, double duration_s, std::uint64_t seed) {
    if (fs < 25.0) {
        throw Error(ErrorCode::InvalidParam, "gen_ppg: fs must be >= 25 Hz");
    }
    UniformSeries out;
    out.fs = fs;
    out.t0 = 0.0;
    const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * fs)) + 1;
    out.values.assign(n, 0.0);

    std::size_t first = 0;
    for (double tb : beats.times) {
        const std::size_t k0 =
            static_cast<std::size_t>(std::max(0.0, std::ceil((tb - kRiseHalf) * fs)));
        const std::size_t k1 = std::min(
            n, static_cast<std::size_t>(std::max(0.0, std::floor((tb + kDecayEnd) * fs))) + 1);
        for (std::size_t k = std::max(first, k0); k < k1; ++k) {
            out.values[k] += pulse_template(static_cast<double>(k) / fs - tb);
        }
        first = k0;  // beats are sorted; never revisit earlier samples
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_std > 0.0 ? noise_std : 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / fs;
        if (drift_amp != 0.0) {
            out.values[k] += drift_amp * std::sin(2.0 * std::numbers::pi * 0.05 * t);
        }
        if (noise_std > 0.0) out.values[k] += noise(rng);
    }
    return out;
}

AccelTriple gen_accel(double duration_s, double fs, const std::vector<MotionBurst>& bursts,
                      double noise_std_g, std::uint64_t seed) {
    std::vector<MotionBurst> sorted = bursts;
    std::sort(sorted.begin(), sorted.end(),
              [](const MotionBurst& a, const MotionBurst& b) { return a.start_s < b.start_s; });
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k].start_s < 0.0 || sorted[k].end_s > duration_s ||
            sorted[k].end_s <= sorted[k].start_s) {
            throw Error(ErrorCode::InvalidParam, "gen_accel: burst outside duration");
        }
        if (k > 0 && sorted[k].start_s < sorted[k - 1].end_s) {
            throw Error(ErrorCode::InvalidParam, "gen_accel: overlapping bursts");
        }
    }

    const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * fs)) + 1;
    AccelTriple out;
    for (UniformSeries* s : {&out.x, &out.y, &out.z}) {
        s->fs = fs;
        s->t0 = 0.0;
        s->values.assign(n, 0.0);
    }
    for (std::size_t k = 0; k < n; ++k) out.z.values[k] = 1.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    if (noise_std_g > 0.0) {
        for (UniformSeries* s : {&out.x, &out.y, &out.z}) {
            for (double& v : s->values) v += noise_std_g * gauss(rng);
        }
    }

    // Band-limited motion: a few sinusoids in 1-6 Hz per axis with random
    // phases, amplitude-normalized per burst and edge-tapered.
    for (const MotionBurst& burst : sorted) {
        for (UniformSeries* s : {&out.x, &out.y, &out.z}) {
            double f1 = 1.0 + 5.0 * uni(rng);
            double f2 = 1.0 + 5.0 * uni(rng);
            double p1 = 2.0 * std::numbers::pi * uni(rng);
            double p2 = 2.0 * std::numbers::pi * uni(rng);
            const std::size_t k0 = static_cast<std::size_t>(std::ceil(burst.start_s * fs));
            const std::size_t k1 =
                std::min(n, static_cast<std::size_t>(std::floor(burst.end_s * fs)) + 1);
            for (std::size_t k = k0; k < k1; ++k) {
                const double t = static_cast<double>(k) / fs;
                const double edge = std::min(t - burst.start_s, burst.end_s - t);
                const double taper = std::clamp(edge / 0.2, 0.0, 1.0);
                // Mix gain keeps the per-axis mean square above amp_g^2 so
                // that a 0.1 g burst clears the 0.01 g^2 mask threshold.
                s->values[k] +=
                    taper * burst.amp_g *
                    (1.5 * std::sin(2.0 * std::numbers::pi * f1 * t + p1) +
                     1.0 * std::sin(2.0 * std::numbers::pi * f2 * t + p2));
            }
        }
    }
    return out;
}

} // namespace synth
} // namespace ppgsleep
