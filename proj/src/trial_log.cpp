#include "lumitact/trial_log.hpp"

#include <fstream>
#include <sstream>

#include "lumitact/config.hpp"

namespace lumitact {

using nlohmann::json;

namespace {

json policy_to_json(const PolicyConfig& p)
{
    json j = {{"kind", to_string(p.kind)}, {"params", to_json(p.params)}};
    if (p.antithetic)
        j["antithetic"] = true;
    return j;
}

PolicyConfig policy_from_json(const json& j)
{
    PolicyConfig p;
    p.kind = parse_policy_kind(j.at("kind").get<std::string>());
    if (auto it = j.find("params"); it != j.end())
        p.params = policy_params_from_json(*it);
    p.antithetic = j.value("antithetic", false);
    return p;
}

LogSample parse_sample(const json& j)
{
    LogSample s;
    s.t = j.at("t").get<double>();
    for (const json& d : j.at("drones")) {
        DroneSample ds;
        ds.id = d.at("id").get<int>();
        ds.position = Vec3(d.at("x").get<double>(), d.at("y").get<double>(), d.at("z").get<double>());
        ds.led = d.at("led").get<bool>();
        ds.motors = d.at("motors").get<bool>();
        s.drones.push_back(ds);
    }
    for (const json& p : j.at("pads")) {
        PadSample ps;
        ps.id = p.at("id").get<int>();
        ps.center = Vec3(p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>());
        ps.tilt = Vec2(p.at("tiltx").get<double>(), p.at("tilty").get<double>());
        const json& amps = p.at("amps");
        if (!amps.is_array() || amps.size() != kUnitCount)
            throw DomainError("pad sample needs 7 amplitudes");
        for (std::size_t i = 0; i < kUnitCount; ++i)
            ps.amplitudes[i] = amps[i].get<double>();
        s.pads.push_back(ps);
    }
    if (auto it = j.find("head"); it != j.end() && !it->is_null()) {
        HeadSample h;
        h.position = Vec3(it->at("x").get<double>(), it->at("y").get<double>(), it->at("z").get<double>());
        h.yaw = it->at("yaw").get<double>();
        s.head = h;
    }
    return s;
}

}  // namespace

json header_record(const TrialMetadata& meta)
{
    json policies = json::array();
    for (const PolicyConfig& p : meta.policies)
        policies.push_back(policy_to_json(p));
    return {
        {"type", "header"},
        {"schema", kLogSchemaVersion},
        {"condition", to_json(meta.condition)},
        {"trial", meta.trial_index},
        {"seed", meta.seed},
        {"dt", meta.scenario.dt},
        {"scenario", to_json(meta.scenario)},
        {"policies", policies},
    };
}

json sample_record(const LogSample& s)
{
    json drones = json::array();
    for (const DroneSample& d : s.drones) {
        drones.push_back({{"id", d.id},
                          {"x", d.position.x()},
                          {"y", d.position.y()},
                          {"z", d.position.z()},
                          {"led", d.led},
                          {"motors", d.motors}});
    }
    json pads = json::array();
    for (const PadSample& p : s.pads) {
        pads.push_back({{"id", p.id},
                        {"x", p.center.x()},
                        {"y", p.center.y()},
                        {"z", p.center.z()},
                        {"tiltx", p.tilt.x()},
                        {"tilty", p.tilt.y()},
                        {"amps", p.amplitudes}});
    }
    json j = {{"type", "sample"}, {"t", s.t}, {"drones", drones}, {"pads", pads}};
    if (s.head) {
        j["head"] = {{"x", s.head->position.x()},
                     {"y", s.head->position.y()},
                     {"z", s.head->position.z()},
                     {"yaw", s.head->yaw}};
    }
    return j;
}

json outcome_record(const TrialLog& log)
{
    json outcomes = json::array();
    for (const DroneOutcome& o : log.outcomes) {
        outcomes.push_back({{"drone", o.drone},
                            {"touchdown_x", o.touchdown.x()},
                            {"touchdown_y", o.touchdown.y()},
                            {"touchdown_z", o.touchdown.z()},
                            {"t", o.t},
                            {"disp_x", o.displacement.x()},
                            {"disp_y", o.displacement.y()}});
    }
    return {{"type", "outcome"}, {"timed_out", log.timed_out}, {"outcomes", outcomes}};
}

void write_trial_log(std::ostream& out, const TrialLog& log)
{
    out << header_record(log.meta).dump() << '\n';
    for (const LogSample& s : log.samples)
        out << sample_record(s).dump() << '\n';
    out << outcome_record(log).dump() << '\n';
}

std::string trial_log_text(const TrialLog& log)
{
    std::ostringstream out;
    write_trial_log(out, log);
    return out.str();
}

void save_trial_log(const std::filesystem::path& path, const TrialLog& log)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write trial log " + path.string());
    write_trial_log(out, log);
    if (!out)
        throw std::runtime_error("failed writing trial log " + path.string());
}

TrialLog read_trial_log(std::istream& in, const LogReadOptions& options, std::vector<std::string>* warnings)
{
    TrialLog log;
    bool have_header = false;
    bool have_outcome = false;
    std::string line;
    int line_no = 0;
    auto corrupt = [&](const std::string& why) {
        const std::string msg = "line " + std::to_string(line_no) + ": " + why;
        if (options.strict || !have_header)
            throw DomainError("corrupt trial log, " + msg);
        if (warnings)
            warnings->push_back(msg);
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            corrupt(e.what());
            continue;
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                if (j.at("schema").get<int>() != kLogSchemaVersion)
                    throw DomainError("unsupported log schema");
                log.meta.condition = condition_from_json(j.at("condition"));
                log.meta.trial_index = j.value("trial", 0);
                log.meta.seed = j.at("seed").get<std::uint64_t>();
                log.meta.scenario = scenario_from_json(j.at("scenario"));
                for (const json& p : j.value("policies", json::array()))
                    log.meta.policies.push_back(policy_from_json(p));
                have_header = true;
            } else if (!have_header) {
                throw DomainError("record before header");
            } else if (type == "sample") {
                log.samples.push_back(parse_sample(j));
            } else if (type == "outcome") {
                log.timed_out = j.at("timed_out").get<bool>();
                for (const json& o : j.at("outcomes")) {
                    DroneOutcome d;
                    d.drone = o.at("drone").get<int>();
                    d.touchdown = Vec3(o.at("touchdown_x").get<double>(), o.at("touchdown_y").get<double>(),
                                       o.at("touchdown_z").get<double>());
                    d.t = o.at("t").get<double>();
                    d.displacement = Vec2(o.at("disp_x").get<double>(), o.at("disp_y").get<double>());
                    log.outcomes.push_back(d);
                }
                have_outcome = true;
            } else {
                throw DomainError("unknown record type '" + type + "'");
            }
        } catch (const json::exception& e) {
            corrupt(e.what());
        } catch (const DomainError& e) {
            corrupt(e.what());
        }
    }
    if (!have_header)
        throw DomainError("trial log has no header record");
    if (!have_outcome) {
        line_no = 0;
        corrupt("missing outcome record");
    }
    return log;
}

TrialLog load_trial_log(const std::filesystem::path& path, const LogReadOptions& options,
                        std::vector<std::string>* warnings)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open trial log " + path.string());
    try {
        return read_trial_log(in, options, warnings);
    } catch (const DomainError& e) {
        throw DomainError(path.string() + ": " + e.what());
    }
}

}  // namespace lumitact
