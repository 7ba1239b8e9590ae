#include "lumitact/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <stdexcept>

namespace lumitact {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view where)
{
    if (!j.is_object())
        throw DomainError(std::string(where) + ": expected an object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    require_object(j, where);
    for (const auto& item : j.items()) {
        bool known = false;
        for (std::string_view key : allowed)
            known = known || key == item.key();
        if (!known)
            throw DomainError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw DomainError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

void read_vec2(const json& j, const char* key, Vec2& out)
{
    if (auto it = j.find(key); it != j.end()) {
        if (!it->is_array() || it->size() != 2)
            throw DomainError(std::string("'") + key + "' must be an array of 2 numbers");
        out = Vec2((*it)[0].get<double>(), (*it)[1].get<double>());
    }
}

void read_vec3(const json& j, const char* key, Vec3& out)
{
    if (auto it = j.find(key); it != j.end()) {
        if (!it->is_array() || it->size() != 3)
            throw DomainError(std::string("'") + key + "' must be an array of 3 numbers");
        out = Vec3((*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>());
    }
}

json photometry_to_json(const PhotometricParams& p)
{
    return {{"source_intensity", p.source_intensity},   {"emit_half_angle", p.emit_half_angle},
            {"accept_half_angle", p.accept_half_angle}, {"ambient_floor", p.ambient_floor},
            {"saturation_current", p.saturation_current}, {"responsivity", p.responsivity}};
}

PhotometricParams photometry_from_json(const json& j, PhotometricParams p)
{
    reject_unknown(j,
                   {"source_intensity", "emit_half_angle", "accept_half_angle", "ambient_floor",
                    "saturation_current", "responsivity"},
                   "scenario.photometry");
    read(j, "source_intensity", p.source_intensity);
    read(j, "emit_half_angle", p.emit_half_angle);
    read(j, "accept_half_angle", p.accept_half_angle);
    read(j, "ambient_floor", p.ambient_floor);
    read(j, "saturation_current", p.saturation_current);
    read(j, "responsivity", p.responsivity);
    return p;
}

}  // namespace

std::string_view to_string(CenterMode mode)
{
    return mode == CenterMode::PlateCenter ? "plate" : "mean";
}

CenterMode parse_center_mode(std::string_view text)
{
    if (text == "plate") return CenterMode::PlateCenter;
    if (text == "mean") return CenterMode::MeanLandingPoint;
    throw DomainError("unknown center mode '" + std::string(text) + "' (expected plate or mean)");
}

json to_json(const ScenarioSpec& s)
{
    return {
        {"drone_count", s.drone_count},
        {"speed_class", to_string(s.speed_class)},
        {"start_height", s.start_height},
        {"spawn_jitter", s.spawn_jitter},
        {"two_drone_separation", s.two_drone_separation},
        {"shutdown_gap", s.shutdown_gap},
        {"nominal_offset", s.nominal_offset},
        {"dt", s.dt},
        {"ground_effect_gain", s.ground_effect_gain},
        {"max_hand_speed", s.max_hand_speed},
        {"hand_accel_limit", s.hand_accel_limit},
        {"pad_height", s.pad_height},
        {"pad_tilt", {s.pad_tilt.x(), s.pad_tilt.y()}},
        {"leg_offset", s.leg_offset},
        {"head_pivot", {s.head_pivot.x(), s.head_pivot.y(), s.head_pivot.z()}},
        {"geometry", {{"plate_radius", s.geometry.plate_radius}, {"ring_radius", s.geometry.ring_radius}}},
        {"photometry", photometry_to_json(s.photometry)},
        {"actuator", {{"lag_time_constant", s.actuator.lag_time_constant}}},
    };
}

ScenarioSpec scenario_from_json(const json& j, ScenarioSpec s)
{
    reject_unknown(j,
                   {"drone_count", "speed_class", "start_height", "spawn_jitter", "two_drone_separation",
                    "shutdown_gap", "nominal_offset", "dt", "ground_effect_gain", "max_hand_speed",
                    "hand_accel_limit", "pad_height", "pad_tilt", "leg_offset", "head_pivot", "geometry",
                    "photometry", "actuator"},
                   "scenario");
    read(j, "drone_count", s.drone_count);
    if (auto it = j.find("speed_class"); it != j.end())
        s.speed_class = parse_speed(it->get<std::string>());
    read(j, "start_height", s.start_height);
    read(j, "spawn_jitter", s.spawn_jitter);
    read(j, "two_drone_separation", s.two_drone_separation);
    read(j, "shutdown_gap", s.shutdown_gap);
    read(j, "nominal_offset", s.nominal_offset);
    read(j, "dt", s.dt);
    read(j, "ground_effect_gain", s.ground_effect_gain);
    read(j, "max_hand_speed", s.max_hand_speed);
    read(j, "hand_accel_limit", s.hand_accel_limit);
    read(j, "pad_height", s.pad_height);
    read_vec2(j, "pad_tilt", s.pad_tilt);
    read(j, "leg_offset", s.leg_offset);
    read_vec3(j, "head_pivot", s.head_pivot);
    if (auto it = j.find("geometry"); it != j.end()) {
        reject_unknown(*it, {"plate_radius", "ring_radius"}, "scenario.geometry");
        double plate = s.geometry.plate_radius;
        double ring = s.geometry.ring_radius;
        read(*it, "plate_radius", plate);
        read(*it, "ring_radius", ring);
        s.geometry = PadGeometry::with_radii(plate, ring);
    }
    if (auto it = j.find("photometry"); it != j.end())
        s.photometry = photometry_from_json(*it, s.photometry);
    if (auto it = j.find("actuator"); it != j.end()) {
        reject_unknown(*it, {"lag_time_constant"}, "scenario.actuator");
        read(*it, "lag_time_constant", s.actuator.lag_time_constant);
    }
    return s;
}

json to_json(const CombinedPolicyParams& p)
{
    return {
        {"visual",
         {{"position_noise_sd", p.visual.position_noise_sd},
          {"operator_bias_gain", p.visual.operator_bias_gain},
          {"pursuit_gain", p.visual.pursuit_gain},
          {"attention_dwell", p.visual.attention_dwell},
          {"unattended_estimate_freeze", p.visual.unattended_estimate_freeze}}},
        {"tactile",
         {{"centroid_gain", p.tactile.centroid_gain},
          {"dither_amplitude", p.tactile.dither_amplitude},
          {"dither_frequency", p.tactile.dither_frequency},
          {"search_speed", p.tactile.search_speed}}},
        {"handover_activation", p.handover_activation},
    };
}

CombinedPolicyParams policy_params_from_json(const json& j, CombinedPolicyParams p)
{
    reject_unknown(j, {"visual", "tactile", "handover_activation"}, "policy");
    if (auto it = j.find("visual"); it != j.end()) {
        reject_unknown(*it,
                       {"position_noise_sd", "operator_bias_gain", "pursuit_gain", "attention_dwell",
                        "unattended_estimate_freeze"},
                       "policy.visual");
        read(*it, "position_noise_sd", p.visual.position_noise_sd);
        read(*it, "operator_bias_gain", p.visual.operator_bias_gain);
        read(*it, "pursuit_gain", p.visual.pursuit_gain);
        read(*it, "attention_dwell", p.visual.attention_dwell);
        read(*it, "unattended_estimate_freeze", p.visual.unattended_estimate_freeze);
    }
    if (auto it = j.find("tactile"); it != j.end()) {
        reject_unknown(*it, {"centroid_gain", "dither_amplitude", "dither_frequency", "search_speed"},
                       "policy.tactile");
        read(*it, "centroid_gain", p.tactile.centroid_gain);
        read(*it, "dither_amplitude", p.tactile.dither_amplitude);
        read(*it, "dither_frequency", p.tactile.dither_frequency);
        read(*it, "search_speed", p.tactile.search_speed);
    }
    read(j, "handover_activation", p.handover_activation);
    return p;
}

json to_json(const ConditionSpec& c)
{
    return {{"feedback", to_string(c.feedback)}, {"speed", to_string(c.speed)}, {"drones", c.drone_count}};
}

ConditionSpec condition_from_json(const json& j)
{
    require_object(j, "condition");
    ConditionSpec c;
    try {
        c.feedback = parse_feedback(j.at("feedback").get<std::string>());
        c.speed = parse_speed(j.at("speed").get<std::string>());
        c.drone_count = j.value("drones", 1);
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad condition: ") + e.what());
    }
    c.validate();
    return c;
}

json to_json(const AnalysisOptions& o)
{
    json j = {{"quantile", o.quantile}, {"center", to_string(o.center)}, {"alpha", o.alpha}};
    j["smoothing_window"] = o.smoothing_window ? json(*o.smoothing_window) : json(nullptr);
    return j;
}

AnalysisOptions analysis_from_json(const json& j, AnalysisOptions o)
{
    reject_unknown(j, {"smoothing_window", "quantile", "center", "alpha"}, "analysis");
    if (auto it = j.find("smoothing_window"); it != j.end()) {
        if (it->is_null())
            o.smoothing_window.reset();
        else
            o.smoothing_window = it->get<int>();
    }
    read(j, "quantile", o.quantile);
    if (auto it = j.find("center"); it != j.end())
        o.center = parse_center_mode(it->get<std::string>());
    read(j, "alpha", o.alpha);
    return o;
}

std::vector<ConditionEntry> ExperimentConfig::default_conditions(int drone_count)
{
    std::vector<ConditionEntry> out;
    for (Feedback f : {Feedback::Visual, Feedback::Tactile, Feedback::VisualTactile}) {
        for (SpeedClass s : {SpeedClass::Slow, SpeedClass::Fast})
            out.push_back({{f, s, drone_count}, std::nullopt});
    }
    return out;
}

void ExperimentConfig::validate() const
{
    if (trials_per_condition < 1)
        throw DomainError("trials_per_condition must be at least 1");
    if (conditions.empty())
        throw DomainError("condition list must not be empty");
    if (workers < 1)
        throw DomainError("workers must be at least 1");
    std::set<ConditionSpec> seen;
    for (const ConditionEntry& e : conditions) {
        e.condition.validate();
        if (!seen.insert(e.condition).second)
            throw DomainError("duplicate condition " + e.condition.label());
        policy_for(e).validate();
    }
    ScenarioSpec probe = scenario;
    probe.drone_count = 1;
    probe.validate();
    if (!(analysis.quantile > 0 && analysis.quantile <= 1))
        throw DomainError("analysis quantile must lie in (0, 1]");
    session.validate(scenario.dt);
}

void SessionOptions::validate(double dt) const
{
    if (!(stream_rate_hz > 0) || !std::isfinite(stream_rate_hz))
        throw DomainError("session stream_rate_hz must be positive");
    const double steps = 1.0 / (stream_rate_hz * dt);
    if (steps < 1.0 - 1e-9 || std::abs(steps - std::round(steps)) > 1e-6)
        throw DomainError("session stream period must be a whole number of simulation steps");
}

json to_json(const SessionOptions& o)
{
    return {{"stream_rate_hz", o.stream_rate_hz}, {"expose_altitude_in_tactile", o.expose_altitude_in_tactile}};
}

SessionOptions session_from_json(const json& j, SessionOptions o)
{
    reject_unknown(j, {"stream_rate_hz", "expose_altitude_in_tactile"}, "session");
    read(j, "stream_rate_hz", o.stream_rate_hz);
    read(j, "expose_altitude_in_tactile", o.expose_altitude_in_tactile);
    return o;
}

const CombinedPolicyParams& ExperimentConfig::policy_for(const ConditionEntry& entry) const
{
    return entry.policy ? *entry.policy : policy;
}

json to_json(const ExperimentConfig& c)
{
    json scenario = to_json(c.scenario);
    scenario.erase("drone_count");
    scenario.erase("speed_class");
    json conditions = json::array();
    for (const ConditionEntry& e : c.conditions) {
        json entry = to_json(e.condition);
        if (e.policy)
            entry["policy"] = to_json(*e.policy);
        conditions.push_back(entry);
    }
    return {
        {"scenario", scenario},
        {"conditions", conditions},
        {"trials_per_condition", c.trials_per_condition},
        {"base_seed", c.base_seed},
        {"policy", to_json(c.policy)},
        {"output_dir", c.output_dir.string()},
        {"workers", c.workers},
        {"analysis", to_json(c.analysis)},
        {"session", to_json(c.session)},
    };
}

ExperimentConfig config_from_json(const json& j)
{
    reject_unknown(j,
                   {"scenario", "conditions", "trials_per_condition", "base_seed", "policy", "output_dir",
                    "workers", "analysis", "session"},
                   "config");
    ExperimentConfig c;
    if (auto it = j.find("scenario"); it != j.end()) {
        if (it->contains("drone_count") || it->contains("speed_class"))
            throw DomainError("scenario: drone_count and speed_class are set per condition");
        c.scenario = scenario_from_json(*it);
    }
    if (auto it = j.find("policy"); it != j.end())
        c.policy = policy_params_from_json(*it);
    if (auto it = j.find("conditions"); it != j.end()) {
        if (!it->is_array())
            throw DomainError("conditions must be an array");
        for (const json& item : *it) {
            reject_unknown(item, {"feedback", "speed", "drones", "policy"}, "conditions[]");
            ConditionEntry e;
            e.condition = condition_from_json(item);
            if (auto p = item.find("policy"); p != item.end())
                e.policy = policy_params_from_json(*p, c.policy);
            c.conditions.push_back(e);
        }
    } else {
        c.conditions = ExperimentConfig::default_conditions();
    }
    read(j, "trials_per_condition", c.trials_per_condition);
    read(j, "base_seed", c.base_seed);
    if (auto it = j.find("output_dir"); it != j.end())
        c.output_dir = it->get<std::string>();
    read(j, "workers", c.workers);
    if (auto it = j.find("analysis"); it != j.end())
        c.analysis = analysis_from_json(*it);
    if (auto it = j.find("session"); it != j.end())
        c.session = session_from_json(*it);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const DomainError& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
}

}  // namespace lumitact
