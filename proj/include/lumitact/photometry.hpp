#pragma once

#include <numbers>

#include "lumitact/types.hpp"

namespace lumitact {

/// Optical channel from a drone's downward LED ring to one recessed
/// photo-transistor. The ring is treated as a point source on the drone axis.
struct PhotometricParams {
    // With responsivity == saturation_current == 1 an on-axis sensor
    // saturates at 0.1 m.
    double source_intensity = 0.01;
    double emit_half_angle = std::numbers::pi / 3.0;
    // 3 mm bore, 10 mm deep.
    double accept_half_angle = 0.29145679447786710;  // atan(0.3)
    double ambient_floor = 0.0;
    double saturation_current = 1.0;
    double responsivity = 1.0;

    void validate() const;
};

struct SensorPose {
    Vec3 position = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
};

/// Illuminance at `sensor` from a point LED: ambient floor plus
/// I0 cos(theta_emit) / D^2 when the ray lies inside both the LED emission
/// cone and the sensor acceptance cone, the ambient floor alone otherwise.
/// Throws DomainError for coincident points or non-unit axes.
double illuminance(const Vec3& led_position, const Vec3& led_axis, const SensorPose& sensor,
                   const PhotometricParams& params);

/// Saturating linear photocurrent as a fraction of saturation, in [0, 1].
double photocurrent(double illuminance, const PhotometricParams& params);

}  // namespace lumitact
