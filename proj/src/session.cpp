#include "lumitact/session.hpp"

#include <cmath>
#include <sstream>

#include "lumitact/trial_log.hpp"

namespace lumitact {

using nlohmann::json;

std::string_view to_string(SessionPhase phase)
{
    switch (phase) {
    case SessionPhase::Waiting:
        return "waiting";
    case SessionPhase::Descending:
        return "descending";
    case SessionPhase::Finished:
        return "finished";
    }
    return "unknown";
}

json error_message(std::string_view code, std::string_view message)
{
    return {{"type", "error"}, {"code", code}, {"message", message}};
}

namespace {

json notice(std::string_view code, std::string_view message)
{
    return {{"type", "notice"}, {"code", code}, {"message", message}};
}

bool finite_number(const json& j)
{
    return j.is_number() && std::isfinite(j.get<double>());
}

}  // namespace

Session::Session(std::string id, SessionSettings settings) : id_(std::move(id)), settings_(std::move(settings))
{
    ScenarioSpec probe = settings_.scenario;
    probe.validate();
    settings_.options.validate(probe.dt);
    steps_per_message_ =
        static_cast<int>(std::lround(1.0 / (settings_.options.stream_rate_hz * settings_.scenario.dt)));
}

json Session::hello() const
{
    return {{"type", "hello"},
            {"session", id_},
            {"dt", settings_.scenario.dt},
            {"stream_rate_hz", settings_.options.stream_rate_hz},
            {"steps_per_message", steps_per_message_},
            {"max_hand_speed", settings_.scenario.max_hand_speed},
            {"phase", to_string(phase_)}};
}

std::vector<json> Session::handle_text(std::string_view frame)
{
    json message;
    try {
        message = json::parse(frame);
    } catch (const json::parse_error& e) {
        return {error_message("bad_json", e.what())};
    }
    return handle(message);
}

std::vector<json> Session::handle(const json& message)
{
    if (closed_)
        return {error_message("session_closed", "session has ended")};
    if (!message.is_object() || !message.contains("type") || !message["type"].is_string())
        return {error_message("bad_message", "message must be an object with a string 'type'")};
    const std::string type = message["type"].get<std::string>();
    if (type == "start_trial")
        return start_trial(message);
    if (type == "pad_cmd")
        return pad_command(message);
    if (type == "get_log") {
        if (phase_ != SessionPhase::Finished)
            return {error_message("log_unavailable", "the log is available once the trial has finished")};
        return {{{"type", "log"}, {"session", id_}, {"format", "jsonl"}, {"data", log_text()}}};
    }
    if (type == "end_session") {
        closed_ = true;
        return {{{"type", "session_closed"}, {"session", id_}, {"phase", to_string(phase_)}}};
    }
    return {error_message("unknown_type", "unknown message type '" + type + "'")};
}

std::vector<json> Session::start_trial(const json& message)
{
    if (phase_ == SessionPhase::Descending)
        return {error_message("duplicate_start", "a trial is already descending")};
    if (phase_ == SessionPhase::Finished)
        return {error_message("session_finished", "this session's trial has finished; open a new session")};

    ConditionSpec condition;
    std::uint64_t seed = 0;
    try {
        for (const auto& [key, value] : message.items()) {
            if (key != "type" && key != "condition" && key != "speed" && key != "drones" && key != "seed")
                throw DomainError("unknown field '" + key + "'");
        }
        condition.feedback = parse_feedback(message.at("condition").get<std::string>());
        condition.speed = parse_speed(message.at("speed").get<std::string>());
        condition.drone_count = message.at("drones").get<int>();
        condition.validate();
        if (auto it = message.find("seed"); it != message.end())
            seed = it->get<std::uint64_t>();
    } catch (const json::exception& e) {
        return {error_message("bad_message", e.what())};
    } catch (const DomainError& e) {
        return {error_message("bad_message", e.what())};
    }

    ScenarioSpec spec = settings_.scenario;
    spec.drone_count = condition.drone_count;
    spec.speed_class = condition.speed;
    world_ = spawn_trial(spec, seed);
    condition_ = condition;
    commands_.assign(world_->pads.size(), Vec2::Zero());

    log_ = TrialLog{};
    log_.meta.condition = condition;
    log_.meta.seed = seed;
    log_.meta.trial_index = settings_.trial_index;
    log_.meta.scenario = spec;
    log_.meta.policies.assign(world_->pads.size(), PolicyConfig{PolicyKind::Human, {}, false});
    log_.samples.push_back(capture_sample(*world_, std::nullopt));
    phase_ = SessionPhase::Descending;

    json ack = {{"type", "trial_started"},
                {"session", id_},
                {"condition", to_string(condition.feedback)},
                {"speed", to_string(condition.speed)},
                {"drones", condition.drone_count},
                {"seed", seed},
                {"dt", spec.dt},
                {"steps_per_message", steps_per_message_},
                {"max_hand_speed", spec.max_hand_speed}};
    return {ack, state_message()};
}

std::vector<json> Session::pad_command(const json& message)
{
    if (phase_ == SessionPhase::Finished)
        return {notice("ignored", "trial finished; pad command ignored")};
    if (phase_ != SessionPhase::Descending)
        return {error_message("not_descending", "pad commands are accepted once a trial has started")};
    const auto pad = message.find("pad");
    if (pad == message.end() || !pad->is_number_integer())
        return {error_message("bad_message", "pad_cmd needs an integer 'pad'")};
    const auto id = pad->get<std::int64_t>();
    if (id < 0 || id >= static_cast<std::int64_t>(commands_.size()))
        return {error_message("unknown_pad", "no pad with id " + std::to_string(id))};
    const auto vx = message.find("vx");
    const auto vy = message.find("vy");
    if (vx == message.end() || vy == message.end() || !finite_number(*vx) || !finite_number(*vy))
        return {error_message("non_finite", "pad_cmd needs finite numeric 'vx' and 'vy'")};

    Vec2 v(vx->get<double>(), vy->get<double>());
    const double max_speed = settings_.scenario.max_hand_speed;
    if (v.norm() > max_speed)
        v *= max_speed / v.norm();
    commands_[static_cast<std::size_t>(id)] = v;
    return {};
}

Vec2 Session::latched_command(int pad) const
{
    if (pad < 0 || pad >= static_cast<int>(commands_.size()))
        throw DomainError("no pad with id " + std::to_string(pad));
    return commands_[static_cast<std::size_t>(pad)];
}

std::vector<json> Session::tick()
{
    if (phase_ != SessionPhase::Descending || closed_)
        return {};
    for (int k = 0; k < steps_per_message_ && !world_->finished(); ++k) {
        step(*world_, commands_);
        log_.samples.push_back(capture_sample(*world_, std::nullopt));
    }
    if (!world_->finished())
        return {state_message()};
    return finish();
}

std::vector<json> Session::finish()
{
    phase_ = SessionPhase::Finished;
    log_.timed_out = world_->timed_out;
    json outcomes = json::array();
    for (const auto& td : world_->touchdowns) {
        if (!td)
            continue;
        log_.outcomes.push_back({td->drone, td->position, td->t, td->displacement});
        outcomes.push_back({{"drone", td->drone},
                            {"displacement_mm", td->displacement.norm() * 1000.0},
                            {"dx", td->displacement.x()},
                            {"dy", td->displacement.y()}});
    }
    if (settings_.log_dir) {
        std::filesystem::create_directories(*settings_.log_dir);
        log_path_ = *settings_.log_dir / ("trial_" + condition_->label() + "_session-" + id_ + ".jsonl");
        save_trial_log(*log_path_, log_);
    }
    json result = {{"type", "trial_result"}, {"outcomes", outcomes}, {"timed_out", log_.timed_out}};
    return {state_message(), result};
}

json Session::state_message() const
{
    if (!world_)
        return {{"type", "state"}, {"t", 0.0}, {"drones", json::array()}, {"pads", json::array()},
                {"phase", to_string(phase_)}};
    const Feedback feedback = condition_->feedback;
    const bool show_xy = feedback != Feedback::Tactile;
    const bool show_z = show_xy || settings_.options.expose_altitude_in_tactile;
    json drones = json::array();
    for (const DroneState& d : world_->drones) {
        json dj = {{"id", d.id}, {"led", d.led_on}};
        if (show_xy) {
            dj["x"] = d.position.x();
            dj["y"] = d.position.y();
        }
        if (show_z)
            dj["z"] = d.position.z();
        drones.push_back(dj);
    }
    json pads = json::array();
    json tactile = json::array();
    for (const PadState& p : world_->pads) {
        pads.push_back({{"id", p.id}, {"x", p.center.x()}, {"y", p.center.y()}});
        tactile.push_back(p.frame.amplitudes);
    }
    json state = {{"type", "state"}, {"t", world_->t()}, {"drones", drones}, {"pads", pads},
                  {"phase", to_string(phase_)}};
    if (feedback != Feedback::Visual)
        state["tactile"] = tactile;
    return state;
}

const TrialLog& Session::log() const
{
    if (phase_ != SessionPhase::Finished)
        throw DomainError("session log is available once the trial has finished");
    return log_;
}

std::string Session::log_text() const
{
    return trial_log_text(log());
}

}  // namespace lumitact
