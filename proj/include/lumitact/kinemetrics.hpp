#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lumitact/types.hpp"

namespace lumitact {

struct Trajectory {
    double dt = 0.0;
    std::vector<Vec3> points;
};

/// Mean Euclidean norms of the first four derivatives over a trajectory.
struct MotionSummary {
    double mean_speed = 0.0;
    double mean_accel = 0.0;
    double mean_jerk = 0.0;
    double mean_snap = 0.0;
};

/// Iterated central differences, (x[i+1] - x[i-1]) / 2dt applied `order`
/// times. With a smoothing window W (odd) a centered moving average is taken
/// first, so the series has len - (W - 1) - 2*order entries; without one it
/// has len - 2*order.
std::vector<Vec3> derivative_series(const Trajectory& traj, int order,
                                    std::optional<int> smoothing_window = std::nullopt);

MotionSummary motion_summary(const Trajectory& traj, std::optional<int> smoothing_window = std::nullopt);

/// Mean XY distance between aligned drone and pad series.
double mean_tracking_distance(std::span<const Vec2> drone_xy, std::span<const Vec2> pad_xy);

}  // namespace lumitact
