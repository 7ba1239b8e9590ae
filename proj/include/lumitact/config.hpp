#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lumitact/flightworld.hpp"
#include "lumitact/landing_metrics.hpp"
#include "lumitact/policies.hpp"
#include "lumitact/trial.hpp"

namespace lumitact {

struct AnalysisOptions {
    std::optional<int> smoothing_window;
    double quantile = 0.9;
    CenterMode center = CenterMode::PlateCenter;
    double alpha = 0.05;
};

/// One experimental cell plus optional policy parameter overrides.
struct ConditionEntry {
    ConditionSpec condition;
    std::optional<CombinedPolicyParams> policy;
};

/// Interactive session settings (serve).
struct SessionOptions {
    double stream_rate_hz = 50.0;
    // Under condition T drone altitude is hidden unless this is set.
    bool expose_altitude_in_tactile = false;

    void validate(double dt) const;
};

struct ExperimentConfig {
    ScenarioSpec scenario;  // drone_count and speed_class come from each condition
    std::vector<ConditionEntry> conditions;
    int trials_per_condition = 5;
    std::uint64_t base_seed = 1;
    CombinedPolicyParams policy;
    std::filesystem::path output_dir = "out";
    int workers = 1;
    AnalysisOptions analysis;
    SessionOptions session;

    /// Three feedback types x two speeds, one drone each.
    static std::vector<ConditionEntry> default_conditions(int drone_count = 1);

    void validate() const;
    const CombinedPolicyParams& policy_for(const ConditionEntry& entry) const;
};

// JSON mapping. Readers reject unknown keys; missing keys keep defaults.
nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const nlohmann::json& j, ScenarioSpec base = {});
nlohmann::json to_json(const CombinedPolicyParams& params);
CombinedPolicyParams policy_params_from_json(const nlohmann::json& j, CombinedPolicyParams base = {});
nlohmann::json to_json(const ConditionSpec& condition);
ConditionSpec condition_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AnalysisOptions& options);
AnalysisOptions analysis_from_json(const nlohmann::json& j, AnalysisOptions base = {});
nlohmann::json to_json(const SessionOptions& options);
SessionOptions session_from_json(const nlohmann::json& j, SessionOptions base = {});
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);

std::string_view to_string(CenterMode mode);
CenterMode parse_center_mode(std::string_view text);

}  // namespace lumitact
