#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "lumitact/session.hpp"
#include "lumitact/trial_log.hpp"

using namespace lumitact;
using nlohmann::json;

namespace {

SessionSettings quick()
{
    SessionSettings s;
    s.scenario.start_height = 1.3;
    return s;
}

json start(const char* feedback, int drones = 1, const char* speed = "fast")
{
    return {{"type", "start_trial"}, {"condition", feedback}, {"speed", speed}, {"drones", drones}, {"seed", 3}};
}

json pad_cmd(int pad, double vx, double vy)
{
    return {{"type", "pad_cmd"}, {"pad", pad}, {"vx", vx}, {"vy", vy}};
}

// Ticks until finished, collecting every message.
std::vector<json> run_out(Session& s)
{
    std::vector<json> all;
    for (int i = 0; i < 10000 && s.phase() == SessionPhase::Descending; ++i)
        for (auto& m : s.tick())
            all.push_back(m);
    return all;
}

}  // namespace

TEST_SUITE("session")
{
    TEST_CASE("phases and acknowledgment")
    {
        Session s("t1", quick());
        CHECK(s.phase() == SessionPhase::Waiting);
        CHECK(s.steps_per_message() == 2);
        CHECK(s.hello()["session"] == "t1");
        CHECK(s.tick().empty());
        const auto out = s.handle(start("VT"));
        REQUIRE(out.size() == 2);
        CHECK(out[0]["type"] == "trial_started");
        CHECK(out[1]["type"] == "state");
        CHECK(out[1]["phase"] == "descending");
        CHECK(s.phase() == SessionPhase::Descending);

        const double t0 = s.world()->t();
        const auto dup = s.handle(start("T"));
        REQUIRE(dup.size() == 1);
        CHECK(dup[0]["type"] == "error");
        CHECK(dup[0]["code"] == "duplicate_start");
        CHECK(s.condition()->feedback == Feedback::VisualTactile);
        CHECK(s.world()->t() == t0);

        const auto state = s.tick();
        CHECK(state[0]["t"].get<double>() == doctest::Approx(0.02));
        CHECK(s.world()->step_index == 2);
    }

    TEST_CASE("masking per condition")
    {
        Session t("t", quick());
        t.handle(start("T", 2));
        for (int i = 0; i < 5; ++i) {
            for (const json& m : t.tick()) {
                for (const json& d : m["drones"]) {
                    CHECK_FALSE(d.contains("x"));
                    CHECK_FALSE(d.contains("y"));
                    CHECK_FALSE(d.contains("z"));
                    CHECK(d.contains("led"));
                }
                CHECK(m.contains("tactile"));
                CHECK(m["tactile"].size() == 2);
                CHECK(m["tactile"][0].size() == 7);
            }
        }

        SessionSettings alt = quick();
        alt.options.expose_altitude_in_tactile = true;
        Session ta("ta", alt);
        const auto first = ta.handle(start("T"));
        CHECK(first[1]["drones"][0].contains("z"));
        CHECK_FALSE(first[1]["drones"][0].contains("x"));

        Session v("v", quick());
        const auto vs = v.handle(start("V"));
        CHECK_FALSE(vs[1].contains("tactile"));
        CHECK(vs[1]["drones"][0].contains("x"));
        for (const json& m : run_out(v))
            CHECK_FALSE(m.contains("tactile"));

        Session vt("vt", quick());
        const auto both = vt.handle(start("VT"));
        CHECK(both[1].contains("tactile"));
        CHECK(both[1]["drones"][0].contains("y"));
    }

    TEST_CASE("pad command latching and clamping")
    {
        Session s("c", quick());
        CHECK(s.handle(pad_cmd(0, 0.1, 0))[0]["code"] == "not_descending");
        s.handle(start("VT", 2));
        CHECK(s.handle(pad_cmd(2, 0, 0))[0]["code"] == "unknown_pad");
        CHECK(s.handle(pad_cmd(-1, 0, 0))[0]["code"] == "unknown_pad");
        CHECK(s.handle_text(R"({"type":"pad_cmd","pad":0,"vx":NaN,"vy":0})")[0]["code"] == "bad_json");
        CHECK(s.handle({{"type", "pad_cmd"}, {"pad", 0}, {"vx", "fast"}, {"vy", 0}})[0]["code"] == "non_finite");
        CHECK(s.handle({{"type", "pad_cmd"}, {"pad", 0}, {"vx", std::numeric_limits<double>::infinity()}, {"vy", 0}})[0]["code"] == "non_finite");

        CHECK(s.handle(pad_cmd(0, 10.0, 0.0)).empty());
        CHECK(s.latched_command(0).norm() == doctest::Approx(0.5));
        s.handle(pad_cmd(0, 0.0, 0.2));
        CHECK(s.latched_command(0) == Vec2(0.0, 0.2));
        const Vec3 before = s.world()->pads[0].center;
        s.tick();
        const Vec3 after = s.world()->pads[0].center;
        CHECK(after.x() == before.x());
        CHECK(after.y() > before.y());

        s.handle(pad_cmd(1, -10.0, 0.0));
        for (int i = 0; i < 40; ++i)
            s.tick();
        CHECK(s.world()->pads[1].velocity.norm() == doctest::Approx(0.5));
        s.handle(pad_cmd(1, 0.0, 0.0));
        Vec2 prev = s.world()->pads[1].velocity;
        for (int i = 0; i < 20; ++i) {
            s.tick();
            const Vec2 v = s.world()->pads[1].velocity;
            CHECK((v - prev).norm() <= 2 * 3.0 * 0.01 + 1e-12);
            prev = v;
        }
        CHECK(s.world()->pads[1].velocity.norm() == 0.0);
    }

    TEST_CASE("finish, result and log")
    {
        Session s("f", quick());
        CHECK(s.handle({{"type", "get_log"}})[0]["code"] == "log_unavailable");
        CHECK_THROWS_AS(s.log(), DomainError);
        s.handle(start("VT"));
        s.handle(pad_cmd(0, 0.03, -0.02));
        const auto all = run_out(s);
        CHECK(s.phase() == SessionPhase::Finished);
        REQUIRE(all.size() >= 2);
        const json& result = all.back();
        CHECK(result["type"] == "trial_result");
        CHECK(all[all.size() - 2]["phase"] == "finished");
        REQUIRE(result["outcomes"].size() == 1);

        const TrialLog& log = s.log();
        CHECK(log.meta.policies.size() == 1);
        CHECK(log.meta.policies[0].kind == PolicyKind::Human);
        CHECK(log.outcomes.size() == 1);
        CHECK(result["outcomes"][0]["displacement_mm"].get<double>()
              == doctest::Approx(log.outcomes[0].displacement.norm() * 1000.0).epsilon(1e-12));
        // Uniform dt spacing even though messages carry two steps each.
        for (std::size_t k = 1; k < log.samples.size(); ++k)
            CHECK(std::abs(log.samples[k].t - log.samples[k - 1].t - 0.01) < 1e-12);

        std::istringstream in(s.log_text());
        const TrialLog back = read_trial_log(in, LogReadOptions{true});
        CHECK(back.outcomes[0].displacement == log.outcomes[0].displacement);

        const auto late = s.handle(pad_cmd(0, 0.1, 0.1));
        REQUIRE(late.size() == 1);
        CHECK(late[0]["type"] == "notice");
        CHECK(s.handle(start("T"))[0]["code"] == "session_finished");
        CHECK(s.tick().empty());
        const auto got = s.handle({{"type", "get_log"}});
        CHECK(got[0]["type"] == "log");
        CHECK(got[0]["data"] == s.log_text());
    }

    TEST_CASE("log file written on finish")
    {
        SessionSettings settings = quick();
        const auto dir = std::filesystem::temp_directory_path() / "lumitact_test_session_logs";
        std::filesystem::remove_all(dir);
        settings.log_dir = dir;
        settings.trial_index = 7;
        Session s("w", settings);
        s.handle(start("T"));
        run_out(s);
        REQUIRE(s.log_path());
        CHECK(std::filesystem::exists(*s.log_path()));
        CHECK(load_trial_log(*s.log_path()).meta.trial_index == 7);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("protocol errors")
    {
        Session s("e", quick());
        CHECK(s.handle_text("not json")[0]["code"] == "bad_json");
        CHECK(s.handle(json::array())[0]["code"] == "bad_message");
        CHECK(s.handle({{"type", "dance"}})[0]["code"] == "unknown_type");
        CHECK(s.handle(start("X"))[0]["code"] == "bad_message");
        CHECK(s.handle({{"type", "start_trial"}, {"condition", "V"}})[0]["code"] == "bad_message");
        CHECK(s.handle(start("V", 3))[0]["code"] == "bad_message");
        CHECK(s.phase() == SessionPhase::Waiting);
        CHECK(s.handle({{"type", "end_session"}})[0]["type"] == "session_closed");
        CHECK(s.closed());
        CHECK(s.handle(start("V"))[0]["code"] == "session_closed");

        SessionSettings bad = quick();
        bad.options.stream_rate_hz = 30.0;
        CHECK_THROWS_AS(Session("b", bad), DomainError);
        bad.options.stream_rate_hz = 100.0;
        CHECK(Session("b", bad).steps_per_message() == 1);
    }
}
