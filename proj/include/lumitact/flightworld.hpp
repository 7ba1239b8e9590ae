#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lumitact/photometry.hpp"
#include "lumitact/policies.hpp"
#include "lumitact/tactor_array.hpp"
#include "lumitact/types.hpp"

namespace lumitact {

/// World frame: operator at the origin facing +Y, Z up.
struct ScenarioSpec {
    int drone_count = 1;
    SpeedClass speed_class = SpeedClass::Slow;
    double start_height = 2.0;
    double spawn_jitter = 0.06;  // half-width of the uniform square
    double two_drone_separation = 1.0;
    double shutdown_gap = 0.005;
    double nominal_offset = 0.5;  // drone distance in front of the operator
    double dt = 0.01;
    double ground_effect_gain = 0.02;  // m of touchdown drift per rad of tilt
    double max_hand_speed = 0.5;
    double hand_accel_limit = 3.0;
    double pad_height = 1.0;
    Vec2 pad_tilt = Vec2::Zero();  // roll, pitch held by the hand
    double leg_offset = 0.02;
    Vec3 head_pivot = Vec3(0.0, 0.0, 1.7);
    PadGeometry geometry;
    PhotometricParams photometry;
    ActuatorParams actuator;

    void validate() const;
    double descent_speed() const { return lumitact::descent_speed(speed_class); }
    double time_budget() const { return 3.0 * start_height / descent_speed(); }
    /// Nominal XY of drone `i`; pad `i` starts underneath it.
    Vec2 nominal_xy(int drone) const;
};

inline constexpr double kGroundEffectTiltThreshold = 0.02;

struct PadState {
    int id = 0;
    Vec3 center = Vec3::Zero();
    Vec2 tilt = Vec2::Zero();
    Vec2 velocity = Vec2::Zero();
    TactileFrame frame;

    PadPose pose() const { return {center, tilt}; }
};

struct Touchdown {
    int drone = 0;
    Vec3 position = Vec3::Zero();
    double t = 0.0;
    Vec2 displacement = Vec2::Zero();  // pad frame, plate center -> touchdown
};

struct Event {
    enum class Kind { Touchdown, Timeout };
    Kind kind = Kind::Touchdown;
    int drone = -1;
    double t = 0.0;
};

struct World {
    ScenarioSpec spec;
    std::int64_t step_index = 0;
    std::vector<DroneState> drones;
    std::vector<PadState> pads;
    std::vector<std::optional<Touchdown>> touchdowns;
    bool timed_out = false;

    double t() const { return static_cast<double>(step_index) * spec.dt; }
    bool finished() const;
};

/// Height of the (possibly tilted) plate plane above `xy`.
double plate_surface_z(const PadState& pad, const Vec2& xy);

/// Drones at start height over their jittered nominal positions, LEDs on,
/// pads at rest underneath the nominal positions. Deterministic in (spec, seed).
World spawn_trial(const ScenarioSpec& spec, std::uint64_t seed);

/// One fixed Euler step: rate-limited pad velocities, vertical descent,
/// shutdown and touchdown detection, tactile update. Commands are world-frame
/// horizontal velocities, one per pad.
std::vector<Event> step(World& world, std::span<const Vec2> pad_commands);

}  // namespace lumitact
