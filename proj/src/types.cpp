#include "lumitact/types.hpp"

namespace lumitact {

double descent_speed(SpeedClass speed)
{
    return speed == SpeedClass::Slow ? 0.1 : 0.15;
}

std::string_view to_string(Feedback feedback)
{
    switch (feedback) {
    case Feedback::Visual: return "V";
    case Feedback::Tactile: return "T";
    case Feedback::VisualTactile: return "VT";
    }
    return "?";
}

std::string_view to_string(SpeedClass speed)
{
    return speed == SpeedClass::Slow ? "slow" : "fast";
}

Feedback parse_feedback(std::string_view text)
{
    if (text == "V") return Feedback::Visual;
    if (text == "T") return Feedback::Tactile;
    if (text == "VT") return Feedback::VisualTactile;
    throw DomainError("unknown feedback type '" + std::string(text) + "' (expected V, T or VT)");
}

SpeedClass parse_speed(std::string_view text)
{
    if (text == "slow") return SpeedClass::Slow;
    if (text == "fast") return SpeedClass::Fast;
    throw DomainError("unknown speed class '" + std::string(text) + "' (expected slow or fast)");
}

void ConditionSpec::validate() const
{
    if (drone_count != 1 && drone_count != 2)
        throw DomainError("drone_count must be 1 or 2, got " + std::to_string(drone_count));
}

std::string ConditionSpec::label() const
{
    return std::string(to_string(feedback)) + "-" + std::string(to_string(speed)) + "-"
        + std::to_string(drone_count);
}

std::string_view hand_name(int pad_id)
{
    return pad_id == 0 ? "right" : "left";
}

}  // namespace lumitact
