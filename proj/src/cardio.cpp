#include "ppgsleep/cardio.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ppgsleep {
namespace cardio {

namespace {

double median_of(const std::deque<double>& vals) {
    std::vector<double> v(vals.begin(), vals.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        m = (m + *std::max_element(v.begin(), v.begin() + mid)) / 2.0;
    }
    return m;
}

} // namespace

BBISeries flag_intervals(const BBISeries& bbi, const motion::MotionMask& mask,
                         const PlausibilityConfig& cfg) {
    BBISeries out = bbi;
    out.flags.assign(bbi.size(), BbiFlag::Valid);
    std::deque<double> recent_valid;
    for (std::size_t k = 0; k < bbi.size(); ++k) {
        const double iv = bbi.interval_ms[k];
        const double t0 = bbi.onset_s[k];
        const double t1 = t0 + iv / 1000.0;
        if (mask.overlaps_corrupted(t0, t1)) {
            out.flags[k] = BbiFlag::Motion;
            continue;
        }
        if (iv < cfg.min_ms || iv > cfg.max_ms) {
            out.flags[k] = BbiFlag::Implausible;
            continue;
        }
        if (!recent_valid.empty()) {
            const double med = median_of(recent_valid);
            if (std::abs(iv - med) > cfg.jump_frac * med) {
                out.flags[k] = BbiFlag::Implausible;
            }
        }
        // Every in-bounds interval feeds the median so that a run of
        // jump-flagged intervals cannot freeze the reference level.
        recent_valid.push_back(iv);
        if (recent_valid.size() > cfg.median_history) recent_valid.pop_front();
    }
    return out;
}

BBISeries correct_intervals(const BBISeries& flagged, const PlausibilityConfig& cfg) {
    // Trim to the span bounded by valid intervals.
    std::size_t first = 0;
    while (first < flagged.size() && flagged.flags[first] != BbiFlag::Valid) ++first;
    std::size_t last = flagged.size();
    while (last > first && flagged.flags[last - 1] != BbiFlag::Valid) --last;

    std::size_t n_valid = 0;
    for (std::size_t k = first; k < last; ++k) {
        if (flagged.flags[k] == BbiFlag::Valid) ++n_valid;
    }
    if (n_valid < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "correct_intervals: fewer than 2 valid intervals");
    }

    BBISeries out;
    out.onset_s.assign(flagged.onset_s.begin() + first, flagged.onset_s.begin() + last);
    out.interval_ms.assign(flagged.interval_ms.begin() + first,
                           flagged.interval_ms.begin() + last);
    out.flags.assign(flagged.flags.begin() + first, flagged.flags.begin() + last);

    std::size_t prev_valid = 0;  // out[0] is valid by construction
    for (std::size_t k = 1; k < out.size(); ++k) {
        if (out.flags[k] == BbiFlag::Valid) {
            if (k > prev_valid + 1) {
                const double t_a = out.onset_s[prev_valid];
                const double t_b = out.onset_s[k];
                const double v_a = out.interval_ms[prev_valid];
                const double v_b = out.interval_ms[k];
                for (std::size_t j = prev_valid + 1; j < k; ++j) {
                    const double w = (out.onset_s[j] - t_a) / (t_b - t_a);
                    out.interval_ms[j] = v_a + w * (v_b - v_a);
                    out.flags[j] = BbiFlag::Interpolated;
                }
                const double run_start = out.onset_s[prev_valid + 1];
                const double run_end = out.onset_s[k - 1] + out.interval_ms[k - 1] / 1000.0;
                if (run_end - run_start > cfg.low_confidence_s) {
                    out.low_confidence.emplace_back(run_start, run_end);
                }
            }
            prev_valid = k;
        }
    }
    return out;
}

std::vector<SamplePoint> heart_rate(const BBISeries& corrected, std::size_t n) {
    if (corrected.size() < n || n == 0) {
        throw Error(ErrorCode::InsufficientData,
                    "heart_rate: need at least " + std::to_string(n) + " intervals");
    }
    std::vector<SamplePoint> out;
    for (std::size_t start = 0; start + n <= corrected.size(); start += n) {
        double inv_sum = 0.0;
        for (std::size_t k = start; k < start + n; ++k) {
            inv_sum += 1.0 / corrected.interval_ms[k];
        }
        const double bpm = 60000.0 / static_cast<double>(n) * inv_sum;
        const std::size_t end = start + n - 1;
        const double t_end = corrected.onset_s[end] + corrected.interval_ms[end] / 1000.0;
        out.push_back({(corrected.onset_s[start] + t_end) / 2.0, bpm});
    }
    return out;
}

} // namespace cardio
} // namespace ppgsleep
