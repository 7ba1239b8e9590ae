#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lumitact/flightworld.hpp"
#include "lumitact/policies.hpp"

namespace lumitact {

/// Human is the interactive session operator; it never runs inside run_trial.
enum class PolicyKind { Still, Visual, Tactile, Combined, Human };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view text);

/// Synthetic hand controller assigned to one pad.
struct PolicyConfig {
    PolicyKind kind = PolicyKind::Still;
    CombinedPolicyParams params;
    // Mirror every random draw of the policy (antithetic variates).
    bool antithetic = false;

    bool uses_vision() const { return kind == PolicyKind::Visual || kind == PolicyKind::Combined; }
    bool uses_touch() const { return kind == PolicyKind::Tactile || kind == PolicyKind::Combined; }
};

/// Policy implied by a feedback condition: V -> visual, T -> tactile, VT -> combined.
PolicyKind policy_for(Feedback feedback);

struct DroneSample {
    int id = 0;
    Vec3 position = Vec3::Zero();
    bool led = false;
    bool motors = false;
};

struct PadSample {
    int id = 0;
    Vec3 center = Vec3::Zero();
    Vec2 tilt = Vec2::Zero();
    Amplitudes amplitudes{};
};

struct LogSample {
    double t = 0.0;
    std::vector<DroneSample> drones;
    std::vector<PadSample> pads;
    std::optional<HeadSample> head;
};

struct DroneOutcome {
    int drone = 0;
    Vec3 touchdown = Vec3::Zero();
    double t = 0.0;
    Vec2 displacement = Vec2::Zero();
};

struct TrialMetadata {
    ConditionSpec condition;
    std::uint64_t seed = 0;
    int trial_index = 0;
    ScenarioSpec scenario;
    std::vector<PolicyConfig> policies;
};

/// Uniformly sampled record of one trial from LED-on to the last touchdown.
struct TrialLog {
    TrialMetadata meta;
    std::vector<LogSample> samples;
    std::vector<DroneOutcome> outcomes;  // landed drones only
    bool timed_out = false;

    const DroneOutcome* outcome_for(int drone) const;
};

LogSample capture_sample(const World& world, const std::optional<HeadSample>& head);

/// Runs spawn -> (policy query -> step) until every drone has landed or the
/// time budget is spent. The metadata condition is derived from the scenario
/// and the first pad's policy; callers may overwrite it.
TrialLog run_trial(const ScenarioSpec& spec, std::span<const PolicyConfig> policies, std::uint64_t seed);

}  // namespace lumitact
