#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lumitact/config.hpp"
#include "lumitact/trial.hpp"

namespace lumitact {

enum class SessionPhase { Waiting, Descending, Finished };

std::string_view to_string(SessionPhase phase);

struct SessionSettings {
    ScenarioSpec scenario;  // drone_count and speed_class come from start_trial
    SessionOptions options;
    // Finished logs are written here when set.
    std::optional<std::filesystem::path> log_dir;
    // Recorded as the log's trial index so session logs pair up in analyze.
    int trial_index = 0;
};

/// One interactive trial driven by a human over the wire protocol. Pure state
/// machine: the caller feeds inbound messages and timer ticks and forwards
/// the returned outbound messages. Not thread-safe; serve runs each session
/// on its own strand.
class Session {
public:
    Session(std::string id, SessionSettings settings);

    const std::string& id() const { return id_; }
    SessionPhase phase() const { return phase_; }
    bool closed() const { return closed_; }
    const std::optional<ConditionSpec>& condition() const { return condition_; }
    int steps_per_message() const { return steps_per_message_; }
    double stream_rate_hz() const { return settings_.options.stream_rate_hz; }

    /// Greeting sent when a client connects.
    nlohmann::json hello() const;

    /// Parses one text frame; malformed frames yield an error message.
    std::vector<nlohmann::json> handle_text(std::string_view frame);
    std::vector<nlohmann::json> handle(const nlohmann::json& message);

    /// Advances the world steps_per_message() fixed steps using the latched
    /// pad commands and returns the masked state (plus trial_result once every
    /// drone is down). Does nothing outside the descending phase.
    std::vector<nlohmann::json> tick();

    /// Latched command for a pad (world frame, m/s, before plant limits).
    Vec2 latched_command(int pad) const;
    const World* world() const { return world_ ? &*world_ : nullptr; }

    /// Full unmasked log; only available once finished.
    const TrialLog& log() const;
    std::string log_text() const;
    std::optional<std::filesystem::path> log_path() const { return log_path_; }

    /// State message for the current world, masked for the condition.
    nlohmann::json state_message() const;

private:
    std::vector<nlohmann::json> start_trial(const nlohmann::json& message);
    std::vector<nlohmann::json> pad_command(const nlohmann::json& message);
    std::vector<nlohmann::json> finish();

    std::string id_;
    SessionSettings settings_;
    int steps_per_message_ = 1;
    SessionPhase phase_ = SessionPhase::Waiting;
    bool closed_ = false;
    std::optional<ConditionSpec> condition_;
    std::optional<World> world_;
    std::vector<Vec2> commands_;
    TrialLog log_;
    std::optional<std::filesystem::path> log_path_;
};

nlohmann::json error_message(std::string_view code, std::string_view message);

}  // namespace lumitact
