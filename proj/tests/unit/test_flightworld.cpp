#include <cmath>

#include "doctest.h"
#include "lumitact/flightworld.hpp"

using namespace lumitact;

namespace {

std::vector<Event> still_step(World& w)
{
    const std::vector<Vec2> zero(w.pads.size(), Vec2::Zero());
    return step(w, zero);
}

void run_to_end(World& w)
{
    while (!w.finished())
        still_step(w);
}

}  // namespace

TEST_SUITE("flightworld")
{
    TEST_CASE("spawn")
    {
        ScenarioSpec spec;
        spec.spawn_jitter = 0.0;
        const World w = spawn_trial(spec, 3);
        CHECK(w.drones[0].position == Vec3(0.0, 0.5, 2.0));
        CHECK(w.pads[0].center == Vec3(0.0, 0.5, 1.0));
        CHECK(w.drones[0].led_on);

        ScenarioSpec jit;
        const World a = spawn_trial(jit, 42);
        const World b = spawn_trial(jit, 42);
        CHECK(a.drones[0].position == b.drones[0].position);
        CHECK(spawn_trial(jit, 43).drones[0].position != a.drones[0].position);

        jit.drone_count = 2;
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const World w2 = spawn_trial(jit, seed);
            const double sep = (w2.drones[0].position - w2.drones[1].position).head<2>().norm();
            CHECK(sep >= 1.0 - 2 * 0.06 * std::sqrt(2.0));
            CHECK(sep <= 1.0 + 2 * 0.06 * std::sqrt(2.0));
            for (const auto& d : w2.drones) {
                const Vec2 off = d.position.head<2>() - jit.nominal_xy(d.id);
                CHECK(std::abs(off.x()) <= 0.06);
                CHECK(std::abs(off.y()) <= 0.06);
            }
        }
        CHECK(jit.nominal_xy(0).x() > 0.0);
    }

    TEST_CASE("Euler descent and descent conservation")
    {
        ScenarioSpec spec;
        World w = spawn_trial(spec, 1);
        const Vec3 start = w.drones[0].position;
        still_step(w);
        CHECK(w.drones[0].position.z() == doctest::Approx(1.999).epsilon(1e-15));
        for (int k = 0; k < 50; ++k) {
            const double z = w.drones[0].position.z();
            still_step(w);
            CHECK(w.drones[0].position.x() == start.x());
            CHECK(w.drones[0].position.y() == start.y());
            CHECK(z - w.drones[0].position.z() == doctest::Approx(0.001).epsilon(1e-9));
        }
    }

    TEST_CASE("touchdown with a still level pad")
    {
        for (SpeedClass speed : {SpeedClass::Slow, SpeedClass::Fast}) {
            ScenarioSpec spec;
            spec.speed_class = speed;
            World w = spawn_trial(spec, 11);
            const Vec2 offset = w.drones[0].position.head<2>() - w.pads[0].center.head<2>();
            bool touched = false;
            while (!w.finished()) {
                for (const Event& e : still_step(w)) {
                    if (e.kind != Event::Kind::Touchdown)
                        continue;
                    touched = true;
                    const DroneState& d = w.drones[0];
                    const double gap = d.position.z() - d.leg_offset - w.pads[0].center.z();
                    CHECK(gap < spec.shutdown_gap);
                    CHECK(gap >= spec.shutdown_gap - spec.descent_speed() * spec.dt - 1e-12);
                    CHECK_FALSE(d.motors_on);
                }
            }
            CHECK(touched);
            CHECK_FALSE(w.timed_out);
            REQUIRE(w.touchdowns[0]);
            CHECK((w.touchdowns[0]->displacement - offset).norm() == 0.0);
        }
    }

    TEST_CASE("ground effect drift on a tilted plate")
    {
        ScenarioSpec level;
        level.spawn_jitter = 0.0;
        ScenarioSpec tilted = level;
        tilted.pad_tilt = Vec2(0.0, 0.1);
        World a = spawn_trial(level, 0);
        World b = spawn_trial(tilted, 0);
        run_to_end(a);
        run_to_end(b);
        REQUIRE(a.touchdowns[0]);
        REQUIRE(b.touchdowns[0]);
        CHECK(a.touchdowns[0]->displacement.norm() == 0.0);
        const Vec2 shift = b.touchdowns[0]->position.head<2>() - a.touchdowns[0]->position.head<2>();
        CHECK(shift.norm() == doctest::Approx(0.002).epsilon(1e-12));
        // Downhill: along the horizontal projection of the plate normal.
        CHECK(shift.x() > 0.0);
        CHECK(std::abs(shift.y()) < 1e-15);

        // Below the threshold there is no drift.
        ScenarioSpec small = level;
        small.pad_tilt = Vec2(0.01, 0.0);
        World c = spawn_trial(small, 0);
        run_to_end(c);
        CHECK(c.touchdowns[0]->position.head<2>() == a.touchdowns[0]->position.head<2>());
    }

    TEST_CASE("hand plant limits")
    {
        ScenarioSpec spec;
        World w = spawn_trial(spec, 2);
        const std::vector<Vec2> fast = {Vec2(10.0, 0.0)};
        Vec2 prev = w.pads[0].velocity;
        for (int k = 0; k < 60; ++k) {
            step(w, fast);
            const Vec2 v = w.pads[0].velocity;
            CHECK(v.norm() <= spec.max_hand_speed + 1e-15);
            CHECK((v - prev).norm() <= spec.hand_accel_limit * spec.dt + 1e-15);
            prev = v;
        }
        CHECK(w.pads[0].velocity.norm() == doctest::Approx(spec.max_hand_speed));
        const std::vector<Vec2> zero = {Vec2::Zero()};
        for (int k = 0; k < 30; ++k)
            step(w, zero);
        CHECK(w.pads[0].velocity.norm() == 0.0);
        const std::vector<Vec2> bad = {Vec2(std::nan(""), 0.0)};
        CHECK_THROWS_AS(step(w, bad), DomainError);
        CHECK_THROWS_AS(step(w, std::vector<Vec2>{}), DomainError);
    }

    TEST_CASE("timeout when the pad walks away")
    {
        ScenarioSpec spec;
        spec.start_height = 1.2;
        spec.pad_height = 1.0;
        World w = spawn_trial(spec, 0);
        // Pad dropped out of reach: move the plate far below the drone path.
        w.pads[0].center.z() = -100.0;
        run_to_end(w);
        CHECK(w.timed_out);
        CHECK(w.t() == doctest::Approx(spec.time_budget()));
    }

    TEST_CASE("scenario validation")
    {
        ScenarioSpec s;
        CHECK_NOTHROW(s.validate());
        s.dt = 0.0;
        CHECK_THROWS_AS(s.validate(), DomainError);
        s = {};
        s.drone_count = 3;
        CHECK_THROWS_AS(s.validate(), DomainError);
        s = {};
        s.start_height = 0.5;
        CHECK_THROWS_AS(s.validate(), DomainError);
    }
}
