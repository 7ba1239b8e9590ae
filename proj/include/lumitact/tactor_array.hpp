#pragma once

#include <array>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "lumitact/photometry.hpp"
#include "lumitact/types.hpp"

namespace lumitact {

inline constexpr std::size_t kUnitCount = 7;
inline constexpr double kCarrierFrequencyHz = 150.0;
inline constexpr double kActivationEpsilon = 1e-6;

using Amplitudes = std::array<double, kUnitCount>;

/// Seven sensor-tactor units: six on a ring (index 0 on the pad +X axis,
/// counter-clockwise every 60 degrees) and one at the plate center (index 6).
struct PadGeometry {
    double plate_radius = 0.080;
    double ring_radius = 0.040;
    std::array<Vec2, kUnitCount> unit_positions = ring_layout(0.040);

    static std::array<Vec2, kUnitCount> ring_layout(double ring_radius);
    static PadGeometry with_radii(double plate_radius, double ring_radius);

    void validate() const;
};

/// Haptic state of one pad: amplitude fractions of full LRA drive.
struct TactileFrame {
    double t = 0.0;
    Amplitudes amplitudes{};

    double total() const;
};

struct ActuatorParams {
    double lag_time_constant = 0.020;
};

struct DroneState {
    int id = 0;
    Vec3 position = Vec3::Zero();
    double descent_speed = 0.0;
    bool led_on = false;
    bool motors_on = false;
    double leg_offset = 0.02;
};

struct PadPose {
    Vec3 center = Vec3::Zero();
    Vec2 tilt = Vec2::Zero();  // roll, pitch (rad)
};

/// Plate orientation: pitch about Y applied after roll about X.
Eigen::Matrix3d pad_rotation(const Vec2& tilt);

std::array<SensorPose, kUnitCount> sensor_poses(const PadPose& pose, const PadGeometry& geometry);

/// Target amplitudes: per unit, the photocurrent of the summed illuminance
/// from every LED-on drone. LEDs point straight down.
Amplitudes raw_frame(std::span<const DroneState> drones, const PadPose& pose,
                     const PadGeometry& geometry, const PhotometricParams& photo);

/// First-order actuator lag toward `target`; tau == 0 passes through.
TactileFrame step_frame(const TactileFrame& prev, const Amplitudes& target, double dt,
                        const ActuatorParams& actuator);

/// Amplitude-weighted mean of unit positions in the pad frame, or nullopt
/// when the summed amplitude does not exceed `epsilon`.
std::optional<Vec2> activation_centroid(const TactileFrame& frame, const PadGeometry& geometry,
                                        double epsilon = kActivationEpsilon);

}  // namespace lumitact
