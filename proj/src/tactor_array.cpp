#include "lumitact/tactor_array.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Geometry>

namespace lumitact {

std::array<Vec2, kUnitCount> PadGeometry::ring_layout(double ring_radius)
{
    std::array<Vec2, kUnitCount> units;
    for (std::size_t i = 0; i < 6; ++i) {
        const double angle = static_cast<double>(i) * std::numbers::pi / 3.0;
        units[i] = Vec2(ring_radius * std::cos(angle), ring_radius * std::sin(angle));
    }
    units[6] = Vec2::Zero();
    return units;
}

PadGeometry PadGeometry::with_radii(double plate_radius, double ring_radius)
{
    PadGeometry g;
    g.plate_radius = plate_radius;
    g.ring_radius = ring_radius;
    g.unit_positions = ring_layout(ring_radius);
    return g;
}

void PadGeometry::validate() const
{
    if (!(plate_radius > 0) || !(ring_radius > 0) || ring_radius > plate_radius)
        throw DomainError("pad geometry requires 0 < ring_radius <= plate_radius");
    if (unit_positions[6].norm() > 1e-12)
        throw DomainError("unit 6 must sit at the plate center");
    for (std::size_t i = 0; i < 6; ++i) {
        if (std::abs(unit_positions[i].norm() - ring_radius) > 1e-12)
            throw DomainError("ring units must lie on the ring radius");
    }
    for (std::size_t i = 0; i < kUnitCount; ++i) {
        for (std::size_t j = i + 1; j < kUnitCount; ++j) {
            if ((unit_positions[i] - unit_positions[j]).norm() < 0.02 - 1e-12)
                throw DomainError("neighbouring units must be at least 20 mm apart");
        }
    }
}

double TactileFrame::total() const
{
    return std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0);
}

Eigen::Matrix3d pad_rotation(const Vec2& tilt)
{
    return (Eigen::AngleAxisd(tilt.y(), Vec3::UnitY()) * Eigen::AngleAxisd(tilt.x(), Vec3::UnitX()))
        .toRotationMatrix();
}

std::array<SensorPose, kUnitCount> sensor_poses(const PadPose& pose, const PadGeometry& geometry)
{
    const Eigen::Matrix3d rotation = pad_rotation(pose.tilt);
    const Vec3 normal = rotation.col(2).normalized();
    std::array<SensorPose, kUnitCount> poses;
    for (std::size_t i = 0; i < kUnitCount; ++i) {
        const Vec2& p = geometry.unit_positions[i];
        poses[i].position = pose.center + rotation * Vec3(p.x(), p.y(), 0.0);
        poses[i].normal = normal;
    }
    return poses;
}

Amplitudes raw_frame(std::span<const DroneState> drones, const PadPose& pose,
                     const PadGeometry& geometry, const PhotometricParams& photo)
{
    const auto sensors = sensor_poses(pose, geometry);
    const Vec3 down = -Vec3::UnitZ();
    Amplitudes amplitudes{};
    for (std::size_t i = 0; i < kUnitCount; ++i) {
        // The ambient floor is seen once per sensor, not once per source.
        double total = photo.ambient_floor;
        for (const DroneState& drone : drones) {
            if (drone.led_on)
                total += illuminance(drone.position, down, sensors[i], photo) - photo.ambient_floor;
        }
        amplitudes[i] = photocurrent(total, photo);
    }
    return amplitudes;
}

TactileFrame step_frame(const TactileFrame& prev, const Amplitudes& target, double dt,
                        const ActuatorParams& actuator)
{
    if (!(dt > 0))
        throw DomainError("step_frame requires dt > 0");
    if (!(actuator.lag_time_constant >= 0))
        throw DomainError("lag_time_constant must be non-negative");

    const double alpha = actuator.lag_time_constant == 0.0
        ? 1.0
        : 1.0 - std::exp(-dt / actuator.lag_time_constant);
    TactileFrame next;
    next.t = prev.t + dt;
    for (std::size_t i = 0; i < kUnitCount; ++i) {
        const double amp = alpha == 1.0
            ? target[i]
            : prev.amplitudes[i] + (target[i] - prev.amplitudes[i]) * alpha;
        next.amplitudes[i] = std::clamp(amp, 0.0, 1.0);
    }
    return next;
}

std::optional<Vec2> activation_centroid(const TactileFrame& frame, const PadGeometry& geometry,
                                        double epsilon)
{
    const double total = frame.total();
    if (!(total > epsilon))
        return std::nullopt;
    Vec2 weighted = Vec2::Zero();
    for (std::size_t i = 0; i < kUnitCount; ++i)
        weighted += frame.amplitudes[i] * geometry.unit_positions[i];
    return Vec2(weighted / total);
}

}  // namespace lumitact
