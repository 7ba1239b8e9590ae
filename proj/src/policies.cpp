#include "lumitact/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lumitact {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a)
{
    return std::remainder(a, kTwoPi);
}

}  // namespace

void VisualPolicyParams::validate() const
{
    if (!(position_noise_sd >= 0) || !(pursuit_gain >= 0) || !(attention_dwell >= 0))
        throw DomainError("visual policy parameters must be non-negative");
    if (!(operator_bias_gain >= 0 && operator_bias_gain <= 1))
        throw DomainError("operator_bias_gain must lie in [0, 1]");
}

void TactilePolicyParams::validate() const
{
    if (!(centroid_gain >= 0) || !(dither_amplitude >= 0) || !(dither_frequency >= 0)
        || !(search_speed >= 0))
        throw DomainError("tactile policy parameters must be non-negative");
}

void CombinedPolicyParams::validate() const
{
    visual.validate();
    tactile.validate();
    if (!(handover_activation > 0))
        throw DomainError("handover_activation must be positive");
}

Vec2 perceive_drone(const Vec2& true_drone_xy, const Vec2& operator_xy,
                    const VisualPolicyParams& params, Rng& rng)
{
    Vec2 noise = Vec2::Zero();
    if (params.position_noise_sd > 0) {
        noise.x() = rng.normal(0.0, params.position_noise_sd);
        noise.y() = rng.normal(0.0, params.position_noise_sd);
    }
    return true_drone_xy + noise + params.operator_bias_gain * (operator_xy - true_drone_xy);
}

Vec2 visual_step(const Vec2& true_drone_xy, const Vec2& operator_xy, const Vec2& pad_xy,
                 const VisualPolicyParams& params, Rng& rng)
{
    const Vec2 perceived = perceive_drone(true_drone_xy, operator_xy, params, rng);
    return params.pursuit_gain * (perceived - pad_xy);
}

Vec2 VisualTracker::command(std::optional<Vec2> attended_drone_xy, const Vec2& operator_xy,
                            const Vec2& pad_xy, const VisualPolicyParams& params, Rng& rng)
{
    if (attended_drone_xy)
        percept_ = perceive_drone(*attended_drone_xy, operator_xy, params, rng);
    if (!percept_)
        return Vec2::Zero();
    return params.pursuit_gain * (*percept_ - pad_xy);
}

Vec2 tactile_step(const TactileFrame& frame, const PadGeometry& geometry, DitherPhase& phase,
                  const TactilePolicyParams& params, Rng& rng, double dt)
{
    const double omega = kTwoPi * params.dither_frequency;
    const double angle = phase.radians;
    phase.radians = wrap_angle(phase.radians + omega * dt);

    const auto centroid = activation_centroid(frame, geometry);
    if (!centroid) {
        const double heading = rng.uniform(0.0, kTwoPi);
        return params.search_speed * Vec2(std::cos(heading), std::sin(heading));
    }

    const double fade = std::clamp(1.0 - frame.total(), 0.0, 1.0);
    const Vec2 dither = params.dither_amplitude * omega * fade * Vec2(-std::sin(angle), std::cos(angle));
    return params.centroid_gain * *centroid + dither;
}

double tactile_weight(double total_activation, double handover_activation)
{
    return std::clamp(total_activation / handover_activation, 0.0, 1.0);
}

Vec2 combined_step(const Vec2& visual_command, const Vec2& tactile_command, double total_activation,
                   const CombinedPolicyParams& params)
{
    const double w = tactile_weight(total_activation, params.handover_activation);
    return (1.0 - w) * visual_command + w * tactile_command;
}

double bearing_from(const Vec3& pivot, const Vec2& target_xy)
{
    return std::atan2(target_xy.y() - pivot.y(), target_xy.x() - pivot.x());
}

HeadSample attention_head_step(HeadState& state, std::span<const Vec2> drone_xys,
                               const HeadParams& params, double dt)
{
    if (drone_xys.size() > 1 && params.attention_dwell > 0) {
        state.dwell_elapsed += dt;
        // Slack absorbs accumulated rounding in dwell_elapsed.
        if (state.dwell_elapsed >= params.attention_dwell - 1e-9) {
            state.attended = (state.attended + 1) % static_cast<int>(drone_xys.size());
            state.dwell_elapsed -= params.attention_dwell;
        }
    }
    if (!drone_xys.empty()) {
        const auto index = static_cast<std::size_t>(std::clamp<int>(
            state.attended, 0, static_cast<int>(drone_xys.size()) - 1));
        const double target = bearing_from(params.pivot, drone_xys[index]);
        const double alpha = params.yaw_time_constant > 0
            ? 1.0 - std::exp(-dt / params.yaw_time_constant)
            : 1.0;
        state.yaw = wrap_angle(state.yaw + alpha * wrap_angle(target - state.yaw));
    }
    HeadSample sample;
    sample.yaw = state.yaw;
    sample.position = params.pivot
        + params.lever_arm * Vec3(std::cos(state.yaw), std::sin(state.yaw), 0.0);
    return sample;
}

}  // namespace lumitact
