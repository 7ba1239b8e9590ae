#include "lumitact/trial.hpp"

#include <string>

#include "lumitact/rng.hpp"

namespace lumitact {

namespace {

constexpr std::uint64_t kVisualStream = 0x5649530000000000ULL;
constexpr std::uint64_t kTactileStream = 0x5441430000000000ULL;

Feedback feedback_of(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Tactile: return Feedback::Tactile;
    case PolicyKind::Combined: return Feedback::VisualTactile;
    default: return Feedback::Visual;
    }
}

// Per-pad controller state; each owns its own random streams so that one
// feedback channel's parameters never perturb the other's draws.
struct HandController {
    PolicyConfig config;
    VisualTracker tracker;
    DitherPhase phase;
    Rng visual_rng;
    Rng tactile_rng;

    HandController(const PolicyConfig& cfg, std::uint64_t seed, int pad)
        : config(cfg)
        , visual_rng(derive_seed(seed, kVisualStream + static_cast<std::uint64_t>(pad)), cfg.antithetic)
        , tactile_rng(derive_seed(seed, kTactileStream + static_cast<std::uint64_t>(pad)), cfg.antithetic)
    {
    }

    Vec2 command(const PadState& pad, std::optional<Vec2> attended_drone_xy, const Vec2& operator_xy,
                 const ScenarioSpec& spec)
    {
        const Vec2 pad_xy = pad.center.head<2>();
        Vec2 visual = Vec2::Zero();
        Vec2 tactile = Vec2::Zero();
        if (config.uses_vision())
            visual = tracker.command(attended_drone_xy, operator_xy, pad_xy, config.params.visual, visual_rng);
        if (config.uses_touch())
            tactile = tactile_step(pad.frame, spec.geometry, phase, config.params.tactile, tactile_rng, spec.dt);

        switch (config.kind) {
        case PolicyKind::Still:
        case PolicyKind::Human: return Vec2::Zero();
        case PolicyKind::Visual: return visual;
        case PolicyKind::Tactile: return tactile;
        case PolicyKind::Combined: return combined_step(visual, tactile, pad.frame.total(), config.params);
        }
        return Vec2::Zero();
    }
};

}  // namespace

std::string_view to_string(PolicyKind kind)
{
    switch (kind) {
    case PolicyKind::Still: return "still";
    case PolicyKind::Visual: return "visual";
    case PolicyKind::Tactile: return "tactile";
    case PolicyKind::Combined: return "combined";
    case PolicyKind::Human: return "human";
    }
    return "?";
}

PolicyKind parse_policy_kind(std::string_view text)
{
    if (text == "still") return PolicyKind::Still;
    if (text == "visual") return PolicyKind::Visual;
    if (text == "tactile") return PolicyKind::Tactile;
    if (text == "combined") return PolicyKind::Combined;
    if (text == "human") return PolicyKind::Human;
    throw DomainError("unknown policy kind '" + std::string(text) + "'");
}

PolicyKind policy_for(Feedback feedback)
{
    switch (feedback) {
    case Feedback::Visual: return PolicyKind::Visual;
    case Feedback::Tactile: return PolicyKind::Tactile;
    case Feedback::VisualTactile: return PolicyKind::Combined;
    }
    return PolicyKind::Still;
}

const DroneOutcome* TrialLog::outcome_for(int drone) const
{
    for (const DroneOutcome& o : outcomes) {
        if (o.drone == drone)
            return &o;
    }
    return nullptr;
}

LogSample capture_sample(const World& world, const std::optional<HeadSample>& head)
{
    LogSample sample;
    sample.t = world.t();
    for (const DroneState& d : world.drones)
        sample.drones.push_back({d.id, d.position, d.led_on, d.motors_on});
    for (const PadState& p : world.pads)
        sample.pads.push_back({p.id, p.center, p.tilt, p.frame.amplitudes});
    sample.head = head;
    return sample;
}

TrialLog run_trial(const ScenarioSpec& spec, std::span<const PolicyConfig> policies, std::uint64_t seed)
{
    if (policies.size() != static_cast<std::size_t>(spec.drone_count))
        throw DomainError("run_trial needs exactly one policy per pad");
    for (const PolicyConfig& p : policies) {
        if (p.kind == PolicyKind::Human)
            throw DomainError("run_trial cannot drive a human policy; use a session");
        p.params.validate();
    }

    World world = spawn_trial(spec, seed);

    TrialLog log;
    log.meta.condition = {feedback_of(policies.front().kind), spec.speed_class, spec.drone_count};
    log.meta.seed = seed;
    log.meta.scenario = spec;
    log.meta.policies.assign(policies.begin(), policies.end());

    std::vector<HandController> hands;
    for (std::size_t i = 0; i < policies.size(); ++i)
        hands.emplace_back(policies[i], seed, static_cast<int>(i));

    // The attention/head model only exists when vision is used with two drones.
    bool watching = false;
    for (const PolicyConfig& p : policies)
        watching = watching || p.uses_vision();
    const bool track_head = watching && spec.drone_count == 2;

    HeadParams head_params;
    head_params.attention_dwell = policies.front().params.visual.attention_dwell;
    head_params.pivot = spec.head_pivot;
    HeadState head_state;
    std::optional<HeadSample> head;
    std::vector<Vec2> drone_xys;
    for (const DroneState& d : world.drones)
        drone_xys.push_back(d.position.head<2>());
    if (track_head) {
        head_state.yaw = bearing_from(head_params.pivot, drone_xys.front());
        head = attention_head_step(head_state, {}, head_params, spec.dt);
    }

    log.samples.push_back(capture_sample(world, head));
    const Vec2 operator_xy = Vec2::Zero();
    std::vector<Vec2> commands(world.pads.size(), Vec2::Zero());

    while (!world.finished()) {
        for (std::size_t i = 0; i < hands.size(); ++i) {
            std::optional<Vec2> seen;
            if (!track_head || head_state.attended == static_cast<int>(i))
                seen = world.drones[i].position.head<2>();
            commands[i] = hands[i].command(world.pads[i], seen, operator_xy, spec);
        }
        step(world, commands);
        if (track_head) {
            for (std::size_t i = 0; i < world.drones.size(); ++i)
                drone_xys[i] = world.drones[i].position.head<2>();
            head = attention_head_step(head_state, drone_xys, head_params, spec.dt);
        }
        log.samples.push_back(capture_sample(world, head));
    }

    log.timed_out = world.timed_out;
    for (const auto& td : world.touchdowns) {
        if (td)
            log.outcomes.push_back({td->drone, td->position, td->t, td->displacement});
    }
    return log;
}

}  // namespace lumitact
