#include "ppgsleep/eval.hpp"

#include "ppgsleep/cardio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace ppgsleep {
namespace eval {

std::size_t default_band(std::size_t n, std::size_t m) {
    const std::size_t longer = std::max(n, m);
    return std::max<std::size_t>(10, longer / 20);
}

DtwPath dtw_align(const std::vector<double>& test, const std::vector<double>& ref,
                  std::size_t band_width) {
    const std::size_t n = test.size();
    const std::size_t m = ref.size();
    if (n == 0 || m == 0) {
        throw Error(ErrorCode::InsufficientData, "dtw_align: empty input");
    }
    if (band_width < 1) {
        throw Error(ErrorCode::InvalidParam, "dtw_align: band width must be >= 1");
    }
    const std::size_t diff = n > m ? n - m : m - n;
    const std::size_t band = std::max(band_width, diff);

    const std::size_t width = 2 * band + 1;
    // Step codes per banded cell: 1 = diag, 2 = up (i-1,j), 3 = left (i,j-1).
    std::vector<std::uint8_t> steps(n * width, 0);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(width, inf), cur(width, inf);

    auto col = [&](std::size_t i, std::size_t j) -> std::size_t {
        // j is guaranteed within [i - band, i + band]; offset into the band row.
        return j + band - i;
    };

    for (std::size_t i = 0; i < n; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        const std::size_t j_lo = i > band ? i - band : 0;
        const std::size_t j_hi = std::min(m - 1, i + band);
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            const double c = std::abs(test[i] - ref[j]);
            double best = inf;
            std::uint8_t step = 0;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                if (i > 0 && j > 0 && j - 1 + band >= i - 1 && j - 1 <= i - 1 + band) {
                    const double v = prev[col(i - 1, j - 1)];
                    if (v < best) { best = v; step = 1; }
                }
                if (i > 0 && j + band >= i - 1 && j <= i - 1 + band) {
                    const double v = prev[col(i - 1, j)];
                    if (v < best) { best = v; step = 2; }
                }
                if (j > 0 && j - 1 + band >= i) {
                    const double v = cur[col(i, j - 1)];
                    if (v < best) { best = v; step = 3; }
                }
                if (best == inf) continue;  // unreachable cell inside the band
            }
            cur[col(i, j)] = best + c;
            steps[i * width + col(i, j)] = step;
        }
        std::swap(prev, cur);
    }

    DtwPath path;
    std::size_t i = n - 1, j = m - 1;
    while (true) {
        path.emplace_back(i, j);
        const std::uint8_t step = steps[i * width + col(i, j)];
        if (i == 0 && j == 0) break;
        switch (step) {
            case 1: --i; --j; break;
            case 2: --i; break;
            case 3: --j; break;
            default:
                throw Error(ErrorCode::InvalidInput, "dtw_align: broken backtrace");
        }
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double dtw_cost(const std::vector<double>& test, const std::vector<double>& ref,
                const DtwPath& path) {
    double cost = 0.0;
    for (const auto& [i, j] : path) cost += std::abs(test[i] - ref[j]);
    return cost;
}

double mae(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::InvalidInput, "mae: length mismatch or empty");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
    return acc / static_cast<double>(a.size());
}

double mape(const std::vector<double>& a, const std::vector<double>& reference) {
    if (a.size() != reference.size() || a.empty()) {
        throw Error(ErrorCode::InvalidInput, "mape: length mismatch or empty");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (reference[k] == 0.0) {
            throw Error(ErrorCode::ZeroReference, "mape: zero reference value");
        }
        acc += std::abs(a[k] - reference[k]) / std::abs(reference[k]);
    }
    return 100.0 * acc / static_cast<double>(a.size());
}

Exclusions auto_exclusions(const BBISeries& ref) {
    Exclusions out;
    auto add = [&out](double s, double e) {
        if (!out.empty() && s <= out.back().second) {
            out.back().second = std::max(out.back().second, e);
        } else {
            out.emplace_back(s, e);
        }
    };
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const double end = ref.onset_s[k] + ref.interval_ms[k] / 1000.0;
        if (ref.interval_ms[k] < 300.0 || ref.interval_ms[k] > 1500.0) {
            add(ref.onset_s[k], end);
        }
        if (k + 1 < ref.size() && ref.onset_s[k + 1] - end > 2.0) {
            add(end, ref.onset_s[k + 1]);
        }
    }
    return out;
}

namespace {

bool in_exclusions(double t, const Exclusions& ex) {
    for (const auto& [s, e] : ex) {
        if (t >= s && t <= e) return true;
    }
    return false;
}

} // namespace

MetricPair evaluate_rr(const BBISeries& test, const BBISeries& ref,
                       const Exclusions& exclusions) {
    Exclusions ex = auto_exclusions(ref);
    ex.insert(ex.end(), exclusions.begin(), exclusions.end());
    std::sort(ex.begin(), ex.end());

    const DtwPath path =
        dtw_align(test.interval_ms, ref.interval_ms,
                  default_band(test.size(), ref.size()));
    std::vector<double> a, b;
    for (const auto& [i, j] : path) {
        if (in_exclusions(ref.onset_s[j], ex)) continue;
        a.push_back(test.interval_ms[i]);
        b.push_back(ref.interval_ms[j]);
    }
    if (a.empty()) {
        throw Error(ErrorCode::InsufficientData, "evaluate_rr: no surviving pairs");
    }
    return {mae(a, b), mape(a, b)};
}

std::vector<SamplePoint> hr_reference(const BBISeries& aligned_ref) {
    return cardio::heart_rate(aligned_ref, 10);
}

MetricPair evaluate_hr(const BBISeries& test, const BBISeries& ref,
                       const Exclusions& exclusions, std::size_t n_beats) {
    Exclusions ex = auto_exclusions(ref);
    ex.insert(ex.end(), exclusions.begin(), exclusions.end());
    std::sort(ex.begin(), ex.end());

    const DtwPath path =
        dtw_align(test.interval_ms, ref.interval_ms,
                  default_band(test.size(), ref.size()));
    std::vector<double> a, b;
    for (const auto& [i, j] : path) {
        if (in_exclusions(ref.onset_s[j], ex)) continue;
        a.push_back(test.interval_ms[i]);
        b.push_back(ref.interval_ms[j]);
    }
    if (a.size() < n_beats) {
        throw Error(ErrorCode::InsufficientData, "evaluate_hr: too few aligned pairs");
    }
    std::vector<double> hr_test, hr_ref;
    for (std::size_t start = 0; start + n_beats <= a.size(); start += n_beats) {
        double inv_a = 0.0, inv_b = 0.0;
        for (std::size_t k = start; k < start + n_beats; ++k) {
            inv_a += 1.0 / a[k];
            inv_b += 1.0 / b[k];
        }
        hr_test.push_back(60000.0 / static_cast<double>(n_beats) * inv_a);
        hr_ref.push_back(60000.0 / static_cast<double>(n_beats) * inv_b);
    }
    return {mae(hr_test, hr_ref), mape(hr_test, hr_ref)};
}

MetricPair evaluate_br(const std::vector<SamplePoint>& est,
                       const std::vector<SamplePoint>& ref) {
    if (est.size() < 2 || ref.empty()) {
        throw Error(ErrorCode::InsufficientData, "evaluate_br: empty input");
    }
    std::vector<double> a, b;
    std::size_t hi = 1;
    for (const SamplePoint& r : ref) {
        if (r.t < est.front().t || r.t > est.back().t) continue;
        while (hi + 1 < est.size() && est[hi].t < r.t) ++hi;
        const SamplePoint& p = est[hi - 1];
        const SamplePoint& q = est[hi];
        const double w = (r.t - p.t) / (q.t - p.t);
        a.push_back(p.value + w * (q.value - p.value));
        b.push_back(r.value);
    }
    if (a.empty()) {
        throw Error(ErrorCode::InsufficientData, "evaluate_br: empty overlap");
    }
    return {mae(a, b), mape(a, b)};
}

SummaryRow summarize(const std::vector<double>& values) {
    if (values.empty()) {
        throw Error(ErrorCode::InsufficientData, "summarize: empty input");
    }
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    auto quantile = [&v](double p) {
        const double h = p * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(v.size() - 1, lo + 1);
        return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    SummaryRow row;
    row.min = v.front();
    row.q25 = quantile(0.25);
    row.median = quantile(0.5);
    row.q75 = quantile(0.75);
    row.max = v.back();
    row.mean = 0.0;
    for (double x : v) row.mean += x;
    row.mean /= static_cast<double>(v.size());
    return row;
}

namespace {

struct NamedMetric {
    const char* label;
    const char* key;
    const std::vector<double>* values;
};

std::vector<NamedMetric> metric_rows(const EvalReport& r) {
    return {
        {"RR MAE [ms]", "rr_mae_ms", &r.rr_mae_ms},
        {"RR MAPE [%]", "rr_mape_pct", &r.rr_mape_pct},
        {"HR MAE [min^-1]", "hr_mae_bpm", &r.hr_mae_bpm},
        {"HR MAPE [%]", "hr_mape_pct", &r.hr_mape_pct},
        {"BR MAE [min^-1]", "br_mae_min", &r.br_mae_min},
        {"BR MAPE [%]", "br_mape_pct", &r.br_mape_pct},
    };
}

} // namespace

std::string EvalReport::to_table() const {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %9s %9s %9s %9s %9s %9s\n", "",
                  "Min", "Q25", "Median", "Q75", "Max", "Mean");
    os << line;
    for (const NamedMetric& m : metric_rows(*this)) {
        if (m.values->empty()) {
            std::snprintf(line, sizeof(line), "%-16s %9s %9s %9s %9s %9s %9s\n",
                          m.label, "-", "-", "-", "-", "-", "-");
            os << line;
            continue;
        }
        const SummaryRow s = summarize(*m.values);
        std::snprintf(line, sizeof(line),
                      "%-16s %9.3f %9.3f %9.3f %9.3f %9.3f %9.3f\n", m.label,
                      s.min, s.q25, s.median, s.q75, s.max, s.mean);
        os << line;
    }
    return os.str();
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    for (const NamedMetric& m : metric_rows(*this)) {
        nlohmann::json entry;
        entry["per_recording"] = *m.values;
        if (!m.values->empty()) {
            const SummaryRow s = summarize(*m.values);
            entry["summary"] = {{"min", s.min},   {"q25", s.q25}, {"median", s.median},
                                {"q75", s.q75},   {"max", s.max}, {"mean", s.mean}};
        }
        j[m.key] = entry;
    }
    return j.dump(2) + "\n";
}

} // namespace eval
} // namespace ppgsleep
