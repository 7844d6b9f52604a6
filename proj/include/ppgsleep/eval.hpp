#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ppgsleep/core.hpp"

namespace ppgsleep {
namespace eval {

/// Warping path as (test index, ref index) pairs.
using DtwPath = std::vector<std::pair<std::size_t, std::size_t>>;

/// Min-cost monotonic alignment under steps {(1,0),(0,1),(1,1)} with
/// absolute-difference cost, restricted to a Sakoe-Chiba band. The band
/// is widened to at least the length difference so a path always exists.
DtwPath dtw_align(const std::vector<double>& test, const std::vector<double>& ref,
                  std::size_t band_width);

double dtw_cost(const std::vector<double>& test, const std::vector<double>& ref,
                const DtwPath& path);

/// Default band: max(10, 5% of the longer input).
std::size_t default_band(std::size_t n, std::size_t m);

double mae(const std::vector<double>& a, const std::vector<double>& b);
double mape(const std::vector<double>& a, const std::vector<double>& reference);

/// Time spans excluded from scoring (reference corrupted or missing).
using Exclusions = std::vector<std::pair<double, double>>;

/// Reference gaps > 2 s and reference intervals outside [300, 1500] ms.
Exclusions auto_exclusions(const BBISeries& ref);

struct MetricPair {
    double mae = 0.0;
    double mape_pct = 0.0;
};

/// DTW-aligns interval values, drops pairs whose reference onset falls in
/// an exclusion span, and scores the survivors.
MetricPair evaluate_rr(const BBISeries& test, const BBISeries& ref,
                       const Exclusions& exclusions = {});

/// Heart-rate reference from aligned reference intervals (same contract
/// as cardio::heart_rate).
std::vector<SamplePoint> hr_reference(const BBISeries& aligned_ref);

/// Pairs the ten-beat heart-rate windows of DTW-aligned test/reference
/// interval sequences and scores them.
MetricPair evaluate_hr(const BBISeries& test, const BBISeries& ref,
                       const Exclusions& exclusions = {}, std::size_t n_beats = 10);

/// Interpolates the estimate at the reference times over the overlap.
MetricPair evaluate_br(const std::vector<SamplePoint>& est,
                       const std::vector<SamplePoint>& ref);

struct SummaryRow {
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0, mean = 0.0;
};

/// Order statistics with inclusive linear-interpolation quantiles.
SummaryRow summarize(const std::vector<double>& values);

struct EvalReport {
    // Parallel per-recording vectors; a metric may be absent (empty).
    std::vector<double> rr_mae_ms, rr_mape_pct;
    std::vector<double> hr_mae_bpm, hr_mape_pct;
    std::vector<double> br_mae_min, br_mape_pct;

    std::string to_table() const;
    std::string to_json() const;
};

} // namespace eval
} // namespace ppgsleep
