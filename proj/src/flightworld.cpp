#include "lumitact/flightworld.hpp"

#include <algorithm>
#include <cmath>

#include "lumitact/rng.hpp"

namespace lumitact {

namespace {

constexpr std::uint64_t kSpawnStream = 0x5350415700000000ULL;

Vec2 clamp_norm(const Vec2& v, double limit)
{
    const double n = v.norm();
    return n > limit ? Vec2(v * (limit / n)) : v;
}

}  // namespace

void ScenarioSpec::validate() const
{
    if (drone_count != 1 && drone_count != 2)
        throw DomainError("drone_count must be 1 or 2");
    if (!(dt > 0))
        throw DomainError("dt must be positive");
    if (!(shutdown_gap > 0))
        throw DomainError("shutdown_gap must be positive");
    if (!(start_height > pad_height))
        throw DomainError("start_height must be above pad_height");
    if (!(spawn_jitter >= 0) || !(two_drone_separation >= 0) || !(leg_offset >= 0)
        || !(ground_effect_gain >= 0))
        throw DomainError("scenario lengths must be non-negative");
    if (!(max_hand_speed > 0) || !(hand_accel_limit > 0))
        throw DomainError("hand limits must be positive");
    if (std::abs(pad_tilt.x()) > 0.35 || std::abs(pad_tilt.y()) > 0.35)
        throw DomainError("pad tilt components must not exceed 0.35 rad");
    geometry.validate();
    photometry.validate();
    if (!(actuator.lag_time_constant >= 0))
        throw DomainError("lag_time_constant must be non-negative");
}

Vec2 ScenarioSpec::nominal_xy(int drone) const
{
    if (drone_count == 1)
        return Vec2(0.0, nominal_offset);
    // Drone 0 lands on the right hand (+X), drone 1 on the left.
    const double half = 0.5 * two_drone_separation;
    return Vec2(drone == 0 ? half : -half, nominal_offset);
}

bool World::finished() const
{
    return timed_out
        || std::all_of(touchdowns.begin(), touchdowns.end(), [](const auto& td) { return td.has_value(); });
}

double plate_surface_z(const PadState& pad, const Vec2& xy)
{
    const Vec3 normal = pad_rotation(pad.tilt).col(2);
    const Vec2 offset = xy - pad.center.head<2>();
    return pad.center.z() - (normal.x() * offset.x() + normal.y() * offset.y()) / normal.z();
}

World spawn_trial(const ScenarioSpec& spec, std::uint64_t seed)
{
    spec.validate();
    World world;
    world.spec = spec;
    Rng rng(derive_seed(seed, kSpawnStream));
    for (int i = 0; i < spec.drone_count; ++i) {
        const Vec2 nominal = spec.nominal_xy(i);
        Vec2 jitter = Vec2::Zero();
        if (spec.spawn_jitter > 0) {
            jitter.x() = rng.uniform(-spec.spawn_jitter, spec.spawn_jitter);
            jitter.y() = rng.uniform(-spec.spawn_jitter, spec.spawn_jitter);
        }
        DroneState drone;
        drone.id = i;
        drone.position = Vec3(nominal.x() + jitter.x(), nominal.y() + jitter.y(), spec.start_height);
        drone.descent_speed = spec.descent_speed();
        drone.led_on = true;
        drone.motors_on = true;
        drone.leg_offset = spec.leg_offset;
        world.drones.push_back(drone);

        PadState pad;
        pad.id = i;
        pad.center = Vec3(nominal.x(), nominal.y(), spec.pad_height);
        pad.tilt = spec.pad_tilt;
        world.pads.push_back(pad);
    }
    world.touchdowns.assign(world.drones.size(), std::nullopt);
    for (PadState& pad : world.pads) {
        const Amplitudes target = raw_frame(world.drones, pad.pose(), spec.geometry, spec.photometry);
        pad.frame.t = 0.0;
        pad.frame.amplitudes = spec.actuator.lag_time_constant == 0.0 ? target : Amplitudes{};
    }
    return world;
}

std::vector<Event> step(World& world, std::span<const Vec2> pad_commands)
{
    const ScenarioSpec& spec = world.spec;
    if (pad_commands.size() != world.pads.size())
        throw DomainError("expected one velocity command per pad");
    for (const Vec2& cmd : pad_commands) {
        if (!cmd.allFinite())
            throw DomainError("pad velocity command must be finite");
    }

    std::vector<Event> events;
    if (world.finished())
        return events;

    const double dt = spec.dt;
    for (std::size_t i = 0; i < world.pads.size(); ++i) {
        PadState& pad = world.pads[i];
        const Vec2 target = clamp_norm(pad_commands[i], spec.max_hand_speed);
        const Vec2 change = clamp_norm(target - pad.velocity, spec.hand_accel_limit * dt);
        pad.velocity = clamp_norm(pad.velocity + change, spec.max_hand_speed);
        pad.center.head<2>() += pad.velocity * dt;
    }

    ++world.step_index;
    const double now = world.t();

    for (std::size_t i = 0; i < world.drones.size(); ++i) {
        DroneState& drone = world.drones[i];
        if (!drone.motors_on)
            continue;
        drone.position.z() = std::max(0.0, drone.position.z() - drone.descent_speed * dt);

        const PadState& pad = world.pads[i];
        const Vec2 xy = drone.position.head<2>();
        const double gap = (drone.position.z() - drone.leg_offset) - plate_surface_z(pad, xy);
        if (gap >= spec.shutdown_gap)
            continue;

        drone.motors_on = false;
        drone.descent_speed = 0.0;
        Touchdown td;
        td.drone = drone.id;
        td.t = now;
        td.position = Vec3(xy.x(), xy.y(), plate_surface_z(pad, xy));
        const double tilt = pad.tilt.norm();
        if (tilt > kGroundEffectTiltThreshold) {
            // Drift toward the downhill side of the plate.
            const Vec3 normal = pad_rotation(pad.tilt).col(2);
            const Vec2 downhill = normal.head<2>().normalized();
            const Vec2 drifted = xy + spec.ground_effect_gain * tilt * downhill;
            td.position = Vec3(drifted.x(), drifted.y(), plate_surface_z(pad, drifted));
        }
        td.displacement = td.position.head<2>() - pad.center.head<2>();
        world.touchdowns[i] = td;
        events.push_back({Event::Kind::Touchdown, drone.id, now});
    }

    for (PadState& pad : world.pads) {
        const Amplitudes target = raw_frame(world.drones, pad.pose(), spec.geometry, spec.photometry);
        pad.frame = step_frame(pad.frame, target, dt, spec.actuator);
        pad.frame.t = now;
    }

    if (!world.finished() && now >= spec.time_budget() - 1e-9) {
        world.timed_out = true;
        events.push_back({Event::Kind::Timeout, -1, now});
    }
    return events;
}

}  // namespace lumitact
