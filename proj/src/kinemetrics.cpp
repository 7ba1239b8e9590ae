#include "lumitact/kinemetrics.hpp"

#include <string>

namespace lumitact {

namespace {

std::vector<Vec3> moving_average(const std::vector<Vec3>& points, int window)
{
    const auto w = static_cast<std::size_t>(window);
    std::vector<Vec3> out;
    out.reserve(points.size() - w + 1);
    for (std::size_t i = 0; i + w <= points.size(); ++i) {
        Vec3 sum = Vec3::Zero();
        for (std::size_t k = 0; k < w; ++k)
            sum += points[i + k];
        out.push_back(sum / static_cast<double>(w));
    }
    return out;
}

std::vector<Vec3> central_difference(const std::vector<Vec3>& x, double dt)
{
    std::vector<Vec3> out;
    out.reserve(x.size() - 2);
    const double inv = 1.0 / (2.0 * dt);
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        out.push_back((x[i + 1] - x[i - 1]) * inv);
    return out;
}

double mean_norm(const std::vector<Vec3>& series)
{
    double sum = 0.0;
    for (const Vec3& v : series)
        sum += v.norm();
    return sum / static_cast<double>(series.size());
}

}  // namespace

std::vector<Vec3> derivative_series(const Trajectory& traj, int order, std::optional<int> smoothing_window)
{
    if (order < 1 || order > 4)
        throw DomainError("derivative order must be in 1..4");
    if (!(traj.dt > 0))
        throw DomainError("trajectory dt must be positive");

    std::vector<Vec3> x = traj.points;
    if (smoothing_window) {
        const int w = *smoothing_window;
        if (w < 1 || w % 2 == 0 || static_cast<std::size_t>(w) >= x.size())
            throw DomainError("smoothing window must be odd and shorter than the trajectory");
        x = moving_average(x, w);
    }
    if (x.size() < static_cast<std::size_t>(2 * order + 1))
        throw DomainError("trajectory too short for derivative order " + std::to_string(order));

    for (int k = 0; k < order; ++k)
        x = central_difference(x, traj.dt);
    return x;
}

MotionSummary motion_summary(const Trajectory& traj, std::optional<int> smoothing_window)
{
    if (traj.points.size() < 9)
        throw DomainError("motion summary needs at least 9 points");
    MotionSummary s;
    s.mean_speed = mean_norm(derivative_series(traj, 1, smoothing_window));
    s.mean_accel = mean_norm(derivative_series(traj, 2, smoothing_window));
    s.mean_jerk = mean_norm(derivative_series(traj, 3, smoothing_window));
    s.mean_snap = mean_norm(derivative_series(traj, 4, smoothing_window));
    return s;
}

double mean_tracking_distance(std::span<const Vec2> drone_xy, std::span<const Vec2> pad_xy)
{
    if (drone_xy.size() != pad_xy.size())
        throw DomainError("drone and pad series differ in length");
    if (drone_xy.empty())
        throw DomainError("tracking distance of an empty series");
    double sum = 0.0;
    for (std::size_t i = 0; i < drone_xy.size(); ++i)
        sum += (drone_xy[i] - pad_xy[i]).norm();
    return sum / static_cast<double>(drone_xy.size());
}

}  // namespace lumitact
