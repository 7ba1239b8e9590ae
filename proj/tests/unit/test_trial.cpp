#include <cmath>

#include "doctest.h"
#include "lumitact/trial.hpp"
#include "lumitact/trial_log.hpp"

using namespace lumitact;

namespace {

std::vector<PolicyConfig> policies(PolicyKind kind, int n, CombinedPolicyParams params = {})
{
    return std::vector<PolicyConfig>(static_cast<std::size_t>(n), PolicyConfig{kind, params, false});
}

CombinedPolicyParams noiseless()
{
    CombinedPolicyParams p;
    p.tactile.dither_amplitude = 0.0;
    return p;
}

// Log text without the header line, which records policy parameters.
std::string records(const TrialLog& log)
{
    const std::string text = trial_log_text(log);
    return text.substr(text.find('\n') + 1);
}

}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("static catch")
    {
        ScenarioSpec spec;
        spec.spawn_jitter = 0.0;
        const TrialLog log = run_trial(spec, policies(PolicyKind::Still, 1), 4);
        REQUIRE(log.outcomes.size() == 1);
        CHECK(log.outcomes[0].displacement.norm() == 0.0);

        World w = spawn_trial(spec, 4);
        w.drones[0].position.x() += 0.05;
        const std::vector<Vec2> zero = {Vec2::Zero()};
        while (!w.finished())
            step(w, zero);
        CHECK(w.touchdowns[0]->displacement.norm() == doctest::Approx(0.05).epsilon(1e-12));
    }

    TEST_CASE("noiseless tactile policy lands within 10 mm")
    {
        ScenarioSpec spec;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const TrialLog log = run_trial(spec, policies(PolicyKind::Tactile, 1, noiseless()), seed);
            REQUIRE(log.outcomes.size() == 1);
            CHECK(log.outcomes[0].displacement.norm() < 0.010);
        }
    }

    TEST_CASE("tactile convergence is monotone once the signal is strong")
    {
        ScenarioSpec spec;
        const CombinedPolicyParams params = noiseless();
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const TrialLog log = run_trial(spec, policies(PolicyKind::Tactile, 1, params), seed);
            double prev = std::numeric_limits<double>::infinity();
            bool engaged = false;
            for (const LogSample& s : log.samples) {
                if (!s.drones[0].motors)
                    break;
                double total = 0.0;
                for (double a : s.pads[0].amplitudes)
                    total += a;
                engaged = engaged || total > params.handover_activation;
                const double d = (s.drones[0].position.head<2>() - s.pads[0].center.head<2>()).norm();
                if (engaged) {
                    CHECK(d <= prev + 1e-12);
                    prev = d;
                }
            }
            CHECK(engaged);
        }
    }

    TEST_CASE("determinism")
    {
        ScenarioSpec spec;
        spec.drone_count = 2;
        const auto p = policies(PolicyKind::Combined, 2);
        CHECK(trial_log_text(run_trial(spec, p, 99)) == trial_log_text(run_trial(spec, p, 99)));
        CHECK(trial_log_text(run_trial(spec, p, 99)) != trial_log_text(run_trial(spec, p, 100)));
    }

    TEST_CASE("condition isolation")
    {
        for (int drones : {1, 2}) {
            ScenarioSpec spec;
            spec.drone_count = drones;
            CombinedPolicyParams a;
            CombinedPolicyParams b;
            b.visual.position_noise_sd = 0.05;
            b.visual.operator_bias_gain = 0.4;
            b.visual.attention_dwell = 0.3;
            CHECK(records(run_trial(spec, policies(PolicyKind::Tactile, drones, a), 7))
                  == records(run_trial(spec, policies(PolicyKind::Tactile, drones, b), 7)));
            CombinedPolicyParams c;
            c.tactile.centroid_gain = 9.0;
            c.tactile.dither_amplitude = 0.0;
            // Policy parameters appear in the header; compare samples and outcomes.
            const TrialLog va = run_trial(spec, policies(PolicyKind::Visual, drones, a), 7);
            const TrialLog vc = run_trial(spec, policies(PolicyKind::Visual, drones, c), 7);
            REQUIRE(va.samples.size() == vc.samples.size());
            for (std::size_t k = 0; k < va.samples.size(); ++k) {
                for (std::size_t p = 0; p < va.samples[k].pads.size(); ++p) {
                    CHECK(va.samples[k].pads[p].center == vc.samples[k].pads[p].center);
                    CHECK(va.samples[k].pads[p].amplitudes == vc.samples[k].pads[p].amplitudes);
                }
            }
        }
    }

    TEST_CASE("log spacing and landing stage")
    {
        ScenarioSpec spec;
        spec.drone_count = 2;
        const TrialLog log = run_trial(spec, policies(PolicyKind::Visual, 2), 3);
        for (std::size_t k = 1; k < log.samples.size(); ++k)
            CHECK(std::abs(log.samples[k].t - log.samples[k - 1].t - spec.dt) < 1e-12);
        CHECK(log.samples.front().t == 0.0);
        CHECK(log.samples.front().head.has_value());
        CHECK(log.outcomes.size() == 2);
        CHECK(log.samples.back().t == doctest::Approx(std::max(log.outcomes[0].t, log.outcomes[1].t)));

        // Head model only with vision and two drones.
        CHECK_FALSE(run_trial(spec, policies(PolicyKind::Tactile, 2), 3).samples.front().head.has_value());
        spec.drone_count = 1;
        CHECK_FALSE(run_trial(spec, policies(PolicyKind::Visual, 1), 3).samples.front().head.has_value());
    }

    TEST_CASE("pad speed limits hold in closed loop")
    {
        ScenarioSpec spec;
        const TrialLog log = run_trial(spec, policies(PolicyKind::Visual, 1), 8);
        for (std::size_t k = 1; k < log.samples.size(); ++k) {
            const Vec2 d = log.samples[k].pads[0].center.head<2>() - log.samples[k - 1].pads[0].center.head<2>();
            CHECK(d.norm() <= spec.max_hand_speed * spec.dt + 1e-12);
        }
    }

    TEST_CASE("argument checks")
    {
        ScenarioSpec spec;
        CHECK_THROWS_AS(run_trial(spec, policies(PolicyKind::Human, 1), 1), DomainError);
        CHECK_THROWS_AS(run_trial(spec, policies(PolicyKind::Still, 2), 1), DomainError);
        CHECK(policy_for(Feedback::Visual) == PolicyKind::Visual);
        CHECK(policy_for(Feedback::Tactile) == PolicyKind::Tactile);
        CHECK(policy_for(Feedback::VisualTactile) == PolicyKind::Combined);
        CHECK(parse_policy_kind("human") == PolicyKind::Human);
        CHECK_THROWS_AS(parse_policy_kind("robot"), DomainError);
    }
}
