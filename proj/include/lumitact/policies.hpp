#pragma once

#include <optional>
#include <span>

#include "lumitact/rng.hpp"
#include "lumitact/tactor_array.hpp"
#include "lumitact/types.hpp"

namespace lumitact {

struct VisualPolicyParams {
    double position_noise_sd = 0.01;
    double operator_bias_gain = 0.1;  // pulls the percept toward the operator
    double pursuit_gain = 2.0;
    double attention_dwell = 0.8;
    bool unattended_estimate_freeze = true;

    void validate() const;
};

struct TactilePolicyParams {
    double centroid_gain = 3.0;
    double dither_amplitude = 0.015;
    double dither_frequency = 1.0;
    double search_speed = 0.05;

    void validate() const;
};

struct CombinedPolicyParams {
    VisualPolicyParams visual;
    TactilePolicyParams tactile;
    double handover_activation = 0.5;

    void validate() const;
};

/// Noisy, operator-biased estimate of a drone's horizontal position.
Vec2 perceive_drone(const Vec2& true_drone_xy, const Vec2& operator_xy,
                    const VisualPolicyParams& params, Rng& rng);

/// Pursuit of a freshly perceived drone position.
Vec2 visual_step(const Vec2& true_drone_xy, const Vec2& operator_xy, const Vec2& pad_xy,
                 const VisualPolicyParams& params, Rng& rng);

/// Visual pursuit with memory: when the drone is not attended and the freeze
/// flag is set, the last percept is reused instead of drawing a new one.
class VisualTracker {
public:
    Vec2 command(std::optional<Vec2> attended_drone_xy, const Vec2& operator_xy, const Vec2& pad_xy,
                 const VisualPolicyParams& params, Rng& rng);

    const std::optional<Vec2>& percept() const { return percept_; }

private:
    std::optional<Vec2> percept_;
};

struct DitherPhase {
    double radians = 0.0;
};

/// Pad-frame velocity from the tactile frame alone: centroid pursuit plus a
/// circular dither that fades as total activation approaches 1, or a random
/// search step when there is no signal.
Vec2 tactile_step(const TactileFrame& frame, const PadGeometry& geometry, DitherPhase& phase,
                  const TactilePolicyParams& params, Rng& rng, double dt);

/// Blend weight of the tactile command, clamp(total / handover, 0, 1).
double tactile_weight(double total_activation, double handover_activation);

Vec2 combined_step(const Vec2& visual_command, const Vec2& tactile_command, double total_activation,
                   const CombinedPolicyParams& params);

struct HeadParams {
    double attention_dwell = 0.8;
    double yaw_time_constant = 0.15;
    Vec3 pivot = Vec3(0.0, 0.0, 1.7);
    double lever_arm = 0.05;
};

struct HeadState {
    int attended = 0;
    double yaw = 0.0;
    double dwell_elapsed = 0.0;
};

struct HeadSample {
    Vec3 position = Vec3::Zero();
    double yaw = 0.0;
};

/// Bearing (world yaw, rad) from the head pivot to a horizontal point.
double bearing_from(const Vec3& pivot, const Vec2& target_xy);

/// Advances the fixed-dwell attention schedule and the lagged head yaw.
/// With a single drone the attended index never changes.
HeadSample attention_head_step(HeadState& state, std::span<const Vec2> drone_xys,
                               const HeadParams& params, double dt);

}  // namespace lumitact
