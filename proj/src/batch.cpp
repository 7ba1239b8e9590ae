#include "lumitact/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "lumitact/rng.hpp"
#include "lumitact/trial_log.hpp"

namespace lumitact {

using nlohmann::json;

namespace {

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json outcome_json(const DroneOutcome& o)
{
    return {{"drone", o.drone},
            {"hand", hand_name(o.drone)},
            {"t", o.t},
            {"disp_x", o.displacement.x()},
            {"disp_y", o.displacement.y()},
            {"displacement_mm", o.displacement.norm() * 1000.0}};
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, const ConditionSpec& condition, int index)
{
    std::uint64_t h = splitmix64(base_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(condition.feedback));
    h = splitmix64(h ^ static_cast<std::uint64_t>(condition.speed));
    h = splitmix64(h ^ static_cast<std::uint64_t>(condition.drone_count));
    return splitmix64(h ^ static_cast<std::uint64_t>(index));
}

std::string trial_file_name(const ConditionSpec& condition, int index)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", index);
    return "trial_" + condition.label() + "_" + buf + ".jsonl";
}

std::vector<PolicyConfig> policies_for(const ConditionSpec& condition, const CombinedPolicyParams& params)
{
    PolicyConfig p;
    p.kind = policy_for(condition.feedback);
    p.params = params;
    return std::vector<PolicyConfig>(static_cast<std::size_t>(condition.drone_count), p);
}

Manifest run_batch(const ExperimentConfig& config)
{
    config.validate();
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);

    struct Job {
        const ConditionEntry* entry;
        int index;
    };
    std::vector<Job> jobs;
    for (const ConditionEntry& e : config.conditions) {
        for (int i = 0; i < config.trials_per_condition; ++i)
            jobs.push_back({&e, i});
    }

    Manifest manifest;
    manifest.base_seed = config.base_seed;
    manifest.analysis = config.analysis;
    manifest.trials.resize(jobs.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                const Job& job = jobs[k];
                const ConditionSpec& cond = job.entry->condition;
                ScenarioSpec spec = config.scenario;
                spec.drone_count = cond.drone_count;
                spec.speed_class = cond.speed;
                const auto seed = trial_seed(config.base_seed, cond, job.index);
                const auto policies = policies_for(cond, config.policy_for(*job.entry));
                TrialLog log = run_trial(spec, policies, seed);
                log.meta.condition = cond;
                log.meta.trial_index = job.index;
                const std::string file = trial_file_name(cond, job.index);
                save_trial_log(config.output_dir / file, log);
                manifest.trials[k] = {file, cond, job.index, seed, log.timed_out, log.outcomes};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const auto n_workers = static_cast<std::size_t>(std::max(1, config.workers));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < std::min(n_workers, jobs.size()); ++w)
            pool.emplace_back(worker);
        worker();
    }
    if (failure)
        std::rethrow_exception(failure);

    json trials = json::array();
    for (const ManifestEntry& m : manifest.trials) {
        json outcomes = json::array();
        for (const DroneOutcome& o : m.outcomes)
            outcomes.push_back(outcome_json(o));
        json entry = to_json(m.condition);
        entry["file"] = m.file;
        entry["index"] = m.index;
        entry["seed"] = m.seed;
        entry["timed_out"] = m.timed_out;
        entry["outcomes"] = outcomes;
        trials.push_back(entry);
    }
    const json doc = {{"schema", kLogSchemaVersion},
                      {"generated_at", utc_timestamp()},
                      {"base_seed", config.base_seed},
                      {"analysis", to_json(config.analysis)},
                      {"trials", trials}};
    const fs::path path = config.output_dir / kManifestFile;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write manifest " + path.string());
    out << doc.dump(2) << '\n';
    return manifest;
}

Manifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
    Manifest m;
    m.base_seed = doc.value("base_seed", std::uint64_t{0});
    if (auto it = doc.find("analysis"); it != doc.end())
        m.analysis = analysis_from_json(*it);
    for (const json& t : doc.at("trials")) {
        ManifestEntry e;
        e.file = t.at("file").get<std::string>();
        e.condition = condition_from_json({{"feedback", t.at("feedback")}, {"speed", t.at("speed")},
                                           {"drones", t.at("drones")}});
        e.index = t.at("index").get<int>();
        e.seed = t.at("seed").get<std::uint64_t>();
        e.timed_out = t.at("timed_out").get<bool>();
        for (const json& o : t.at("outcomes")) {
            DroneOutcome d;
            d.drone = o.at("drone").get<int>();
            d.t = o.at("t").get<double>();
            d.displacement = Vec2(o.at("disp_x").get<double>(), o.at("disp_y").get<double>());
            e.outcomes.push_back(d);
        }
        m.trials.push_back(std::move(e));
    }
    return m;
}

}  // namespace lumitact
