#include "lumitact/photometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

namespace lumitact {

namespace {

constexpr double kUnitTolerance = 1e-9;

void require_unit(const Vec3& v, const char* what)
{
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTolerance)
        throw DomainError(std::string(what) + " must be a unit vector");
}

// Angle between two vectors, accurate near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

void PhotometricParams::validate() const
{
    const bool positive = source_intensity > 0 && emit_half_angle > 0 && accept_half_angle > 0
        && saturation_current > 0 && responsivity > 0;
    if (!positive || !(ambient_floor >= 0))
        throw DomainError("photometric parameters must be positive (ambient_floor >= 0)");
    if (emit_half_angle >= std::numbers::pi / 2 || accept_half_angle >= std::numbers::pi / 2)
        throw DomainError("cone half-angles must lie in (0, pi/2)");
}

double illuminance(const Vec3& led_position, const Vec3& led_axis, const SensorPose& sensor,
                   const PhotometricParams& params)
{
    require_unit(led_axis, "led_axis");
    require_unit(sensor.normal, "sensor normal");

    const Vec3 to_sensor = sensor.position - led_position;
    const double distance = to_sensor.norm();
    if (!(distance > 0))
        throw DomainError("LED and sensor positions coincide");

    const double emit_angle = angle_between(led_axis, to_sensor);
    const double accept_angle = angle_between(sensor.normal, -to_sensor);
    if (emit_angle > params.emit_half_angle || accept_angle > params.accept_half_angle)
        return params.ambient_floor;

    return params.ambient_floor
        + params.source_intensity * std::cos(emit_angle) / (distance * distance);
}

double photocurrent(double illuminance, const PhotometricParams& params)
{
    if (!(illuminance >= 0))
        throw DomainError("illuminance must be non-negative");
    const double current = std::min(params.responsivity * illuminance, params.saturation_current);
    return current / params.saturation_current;
}

}  // namespace lumitact
