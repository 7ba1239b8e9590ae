#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace lumitact {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Input outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Well-formed input for which the requested quantity is undefined
// (zero variance, vertical regression axis, ...).
class DegenerateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Feedback { Visual, Tactile, VisualTactile };
enum class SpeedClass { Slow, Fast };

/// Descent speed in m/s for a speed class: 0.1 (slow) or 0.15 (fast).
double descent_speed(SpeedClass speed);

std::string_view to_string(Feedback feedback);
std::string_view to_string(SpeedClass speed);
Feedback parse_feedback(std::string_view text);
SpeedClass parse_speed(std::string_view text);

/// Grouping key for every statistic: feedback type, descent speed, drone count.
struct ConditionSpec {
    Feedback feedback = Feedback::Visual;
    SpeedClass speed = SpeedClass::Slow;
    int drone_count = 1;

    void validate() const;
    std::string label() const;  // e.g. "VT-slow-2"

    friend bool operator==(const ConditionSpec&, const ConditionSpec&) = default;
    friend auto operator<=>(const ConditionSpec&, const ConditionSpec&) = default;
};

/// "right" for pad 0, "left" for pad 1.
std::string_view hand_name(int pad_id);

}  // namespace lumitact
