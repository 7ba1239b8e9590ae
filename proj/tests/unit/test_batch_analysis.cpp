#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lumitact/analysis.hpp"
#include "lumitact/batch.hpp"
#include "lumitact/trial_log.hpp"

using namespace lumitact;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("lumitact_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig small_config(const fs::path& out)
{
    ExperimentConfig c;
    c.conditions = ExperimentConfig::default_conditions(1);
    c.trials_per_condition = 5;
    c.output_dir = out;
    return c;
}

}  // namespace

TEST_SUITE("harness")
{
    TEST_CASE("trial seeds are a stable pure function")
    {
        CHECK(trial_seed(1, {Feedback::Tactile, SpeedClass::Slow, 1}, 0) == 16767720616986041235ULL);
        CHECK(trial_seed(42, {Feedback::VisualTactile, SpeedClass::Fast, 2}, 4) == 4789597746867987310ULL);
        CHECK(trial_file_name({Feedback::Visual, SpeedClass::Fast, 2}, 7) == "trial_V-fast-2_007.jsonl");
    }

    TEST_CASE("30-trial batch: files, manifest, determinism, worker independence")
    {
        const fs::path a = scratch("batch_a");
        const fs::path b = scratch("batch_b");
        ExperimentConfig ca = small_config(a);
        ExperimentConfig cb = small_config(b);
        cb.workers = 3;
        const Manifest ma = run_batch(ca);
        run_batch(cb);

        std::size_t logs = 0;
        for (const auto& e : fs::directory_iterator(a))
            logs += e.path().extension() == ".jsonl";
        CHECK(logs == 30);
        CHECK(fs::exists(a / kManifestFile));
        CHECK(ma.trials.size() == 30);
        for (const auto& t : ma.trials) {
            REQUIRE(fs::exists(a / t.file));
            CHECK(slurp(a / t.file) == slurp(b / t.file));
        }
        const Manifest back = load_manifest(a / kManifestFile);
        REQUIRE(back.trials.size() == 30);
        CHECK(back.trials[4].seed == ma.trials[4].seed);
        CHECK(back.trials[4].outcomes[0].displacement == ma.trials[4].outcomes[0].displacement);
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("empty batch is rejected")
    {
        ExperimentConfig c = small_config(scratch("empty"));
        c.trials_per_condition = 0;
        CHECK_THROWS_AS(run_batch(c), DomainError);
    }
}

TEST_SUITE("analysis")
{
    TEST_CASE("zero-motion policy with centered spawn gives zero displacement")
    {
        const fs::path dir = scratch("still_logs");
        fs::create_directories(dir);
        ScenarioSpec spec;
        spec.spawn_jitter = 0.0;
        const std::vector<PolicyConfig> still = {PolicyConfig{PolicyKind::Still, {}, false}};
        for (int i = 0; i < 3; ++i) {
            TrialLog log = run_trial(spec, still, static_cast<std::uint64_t>(i));
            log.meta.trial_index = i;
            save_trial_log(dir / ("trial_" + std::to_string(i) + ".jsonl"), log);
        }
        const fs::path out = scratch("still_report");
        const AnalysisReport r = analyze(dir, out, {});
        REQUIRE(r.displacement.size() == 1);
        CHECK(r.displacement[0].stats.mean == 0.0);
        CHECK(r.displacement[0].stats.maximum == 0.0);
        const auto rows = read_csv(out / "table3_displacement.csv");
        REQUIRE(rows.size() == 2);
        CHECK(rows[1][5] == "0");
        CHECK(rows[1][7] == "0");
        fs::remove_all(dir);
        fs::remove_all(out);
    }

    TEST_CASE("reports are pure and consistent with the manifest")
    {
        const fs::path logs = scratch("an_logs");
        ExperimentConfig c = small_config(logs);
        auto two = ExperimentConfig::default_conditions(2);
        c.conditions.insert(c.conditions.end(), two.begin(), two.end());
        c.trials_per_condition = 4;
        const Manifest m = run_batch(c);

        const fs::path r1 = scratch("an_r1");
        const fs::path r2 = scratch("an_r2");
        const AnalysisReport report = analyze(logs, r1, {});
        analyze(logs, r2, {});
        for (const char* f : {"table1_hand_kinematics.csv", "table2_head_kinematics.csv", "table3_displacement.csv",
                              "table4_diameters.csv", "anova_report.csv", "anova_report.txt", "ttests.csv",
                              "regression.csv"}) {
            REQUIRE(fs::exists(r1 / f));
            CHECK(slurp(r1 / f) == slurp(r2 / f));
        }
        CHECK(report.trials == 48);
        CHECK(report.warnings.empty());
        REQUIRE(report.anova);
        CHECK(report.anova->effects.size() == 3);
        CHECK(report.anova->effects[0].error_df == 3);
        CHECK(report.head_kinematics.size() == 4);  // V and VT with two drones
        CHECK(report.hand_kinematics.size() == 18);
        CHECK(report.ttests.size() == 15 * 3);

        // Table IV: brute-force nearest rank over manifest outcomes.
        const auto rows = read_csv(r1 / "table4_diameters.csv");
        CHECK(rows.size() == 19);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const ConditionSpec cond{parse_feedback(rows[i][0]), parse_speed(rows[i][1]), std::stoi(rows[i][2])};
            const int pad = rows[i][3] == "right" ? 0 : 1;
            std::vector<double> radii;
            for (const auto& t : m.trials) {
                if (!(t.condition == cond))
                    continue;
                for (const auto& o : t.outcomes)
                    if (o.drone == pad)
                        radii.push_back(o.displacement.norm());
            }
            std::sort(radii.begin(), radii.end());
            const auto n = radii.size();
            std::size_t rank = 1;
            while (static_cast<double>(rank) < 0.9 * static_cast<double>(n) - 1e-9)
                ++rank;
            CHECK(std::stod(rows[i][7]) == 2.0 * radii[rank - 1]);
        }
        fs::remove_all(logs);
        fs::remove_all(r1);
        fs::remove_all(r2);
    }

    TEST_CASE("corrupt logs: lenient skips, strict fails")
    {
        const fs::path logs = scratch("corrupt_logs");
        ExperimentConfig c = small_config(logs);
        c.trials_per_condition = 2;
        run_batch(c);
        {
            std::ofstream bad(logs / "trial_zz_broken.jsonl");
            bad << "{\"type\": \"sample\"}\n";
        }
        std::ofstream(logs / "trial_V-slow-1_000.jsonl", std::ios::app) << "garbage\n";
        const fs::path out = scratch("corrupt_report");
        const AnalysisReport r = analyze(logs, out, {});
        CHECK(r.trials == 12);
        CHECK(r.warnings.size() == 2);
        AnalyzeOptions strict;
        strict.strict = true;
        CHECK_THROWS_AS(analyze(logs, out, strict), DomainError);
        CHECK_THROWS(analyze(logs / "missing", out, {}));
        fs::remove_all(logs);
        fs::remove_all(out);
    }

    TEST_CASE("number formatting")
    {
        CHECK(format_number(0.018) == "0.018");
        CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
        CHECK(format_number(std::nan("")) == "NA");
        CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    }
}
