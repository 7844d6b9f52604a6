#pragma once

#include <vector>

#include "ppgsleep/core.hpp"

namespace ppgsleep {
namespace motion {

struct MotionWindow {
    double start_s = 0.0;
    double end_s = 0.0;
    double power = 0.0;  // g^2
    bool corrupted = false;
};

/// Contiguous non-overlapping windows plus merged corrupted segments.
struct MotionMask {
    std::vector<MotionWindow> windows;
    std::vector<std::pair<double, double>> corrupted_segments;

    bool overlaps_corrupted(double t_start, double t_end) const;
};

/// Pointwise Euclidean norm of the three acceleration axes, in g.
UniformSeries accel_norm(const UniformSeries& x, const UniformSeries& y,
                         const UniformSeries& z);

/// Subtracts a centered moving average (default 2 s) from the norm,
/// leaving the dynamic component. Truncated windows at the edges.
UniformSeries remove_gravity(const UniformSeries& norm, double window_s = 2.0);

/// Mean squared value per non-overlapping window; a trailing partial
/// window is dropped.
std::vector<MotionWindow> motion_power(const UniformSeries& hp, double window_s = 1.0);

/// Thresholds per-window powers and merges adjacent corrupted windows.
MotionMask motion_mask(std::vector<MotionWindow> powers, double threshold_g2);

} // namespace motion
} // namespace ppgsleep
