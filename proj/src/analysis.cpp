#include "lumitact/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lumitact/trial_log.hpp"

namespace lumitact {

namespace fs = std::filesystem;

namespace {

// Report ordering: drone count, then hand, then feedback and speed.
struct GroupKey {
    int drones;
    int pad;
    Feedback feedback;
    SpeedClass speed;

    ConditionSpec condition() const { return {feedback, speed, drones}; }
    friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct PadSeries {
    std::vector<Vec3> pad_path;
    std::vector<Vec2> drone_xy;
    std::optional<DroneOutcome> outcome;
};

struct TrialData {
    ConditionSpec condition;
    int index = 0;
    double dt = 0.0;
    std::vector<PadSeries> pads;
    std::vector<Vec3> head_path;
};

TrialData extract(const TrialLog& log)
{
    TrialData t;
    t.condition = log.meta.condition;
    t.index = log.meta.trial_index;
    t.dt = log.meta.scenario.dt;
    const std::size_t n_pads = log.samples.empty() ? 0 : log.samples.front().pads.size();
    t.pads.resize(n_pads);
    for (std::size_t p = 0; p < n_pads; ++p) {
        const DroneOutcome* outcome = log.outcome_for(static_cast<int>(p));
        if (outcome)
            t.pads[p].outcome = *outcome;
        // Landing stage: LED on until this drone touches down.
        for (const LogSample& s : log.samples) {
            if (p >= s.pads.size() || p >= s.drones.size())
                continue;
            if (outcome && s.t > outcome->t + 1e-9)
                break;
            t.pads[p].pad_path.push_back(s.pads[p].center);
            t.pads[p].drone_xy.push_back(s.drones[p].position.head<2>());
        }
    }
    for (const LogSample& s : log.samples) {
        if (s.head)
            t.head_path.push_back(s.head->position);
    }
    return t;
}

MotionSummary average(const std::vector<MotionSummary>& v)
{
    MotionSummary m;
    for (const MotionSummary& s : v) {
        m.mean_speed += s.mean_speed;
        m.mean_accel += s.mean_accel;
        m.mean_jerk += s.mean_jerk;
        m.mean_snap += s.mean_snap;
    }
    const auto n = static_cast<double>(v.size());
    m.mean_speed /= n;
    m.mean_accel /= n;
    m.mean_jerk /= n;
    m.mean_snap /= n;
    return m;
}

std::string condition_name(const ConditionSpec& c)
{
    return std::string(to_string(c.feedback)) + "-" + std::string(to_string(c.speed));
}

std::ofstream open_csv(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write report " + path.string());
    return out;
}

void condition_cells(std::ostream& out, const ConditionSpec& c)
{
    out << to_string(c.feedback) << ',' << to_string(c.speed) << ',' << c.drone_count;
}

}  // namespace

std::string format_number(double value)
{
    if (std::isnan(value))
        return "NA";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, end) : "NA";
}

AnalysisReport analyze_logs(const fs::path& log_dir, const AnalyzeOptions& options)
{
    if (!fs::is_directory(log_dir))
        throw std::runtime_error("log directory not found: " + log_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(log_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    AnalysisReport report;
    std::vector<TrialData> trials;
    LogReadOptions read_options;
    read_options.strict = options.strict;
    for (const fs::path& file : files) {
        std::vector<std::string> warnings;
        try {
            const TrialLog log = load_trial_log(file, read_options, &warnings);
            trials.push_back(extract(log));
        } catch (const DomainError& e) {
            if (options.strict)
                throw;
            report.warnings.push_back(std::string("skipped ") + e.what());
        }
        for (const std::string& w : warnings)
            report.warnings.push_back(file.filename().string() + ": " + w);
    }
    if (trials.empty())
        throw DomainError("no parseable trial logs in " + log_dir.string());
    report.trials = trials.size();

    const AnalysisOptions& opt = options.analysis;

    // Hand kinematics, displacement, diameters and regressions share grouping.
    std::map<GroupKey, std::vector<MotionSummary>> motion;
    std::map<GroupKey, std::vector<double>> tracking;
    std::map<GroupKey, std::vector<Vec2>> landings;
    std::map<GroupKey, std::map<int, double>> by_index;  // per-trial displacement (m)
    std::map<ConditionSpec, std::vector<MotionSummary>> head;

    for (const TrialData& t : trials) {
        for (std::size_t p = 0; p < t.pads.size(); ++p) {
            const PadSeries& series = t.pads[p];
            const GroupKey key{t.condition.drone_count, static_cast<int>(p), t.condition.feedback,
                               t.condition.speed};
            try {
                motion[key].push_back(motion_summary({t.dt, series.pad_path}, opt.smoothing_window));
                std::vector<Vec2> pad_xy;
                for (const Vec3& c : series.pad_path)
                    pad_xy.push_back(c.head<2>());
                tracking[key].push_back(mean_tracking_distance(series.drone_xy, pad_xy));
            } catch (const DomainError& e) {
                report.warnings.push_back(t.condition.label() + " trial " + std::to_string(t.index) + ": "
                                          + e.what());
            }
            if (series.outcome) {
                landings[key].push_back(series.outcome->displacement);
                by_index[key][t.index] = series.outcome->displacement.norm();
            }
        }
        if (t.head_path.size() >= 9) {
            try {
                head[t.condition].push_back(motion_summary({t.dt, t.head_path}, opt.smoothing_window));
            } catch (const DomainError& e) {
                report.warnings.push_back(std::string("head kinematics: ") + e.what());
            }
        }
    }

    for (const auto& [key, summaries] : motion) {
        if (summaries.empty())
            continue;
        HandKinematicsRow row;
        row.condition = key.condition();
        row.pad = key.pad;
        row.trials = summaries.size();
        row.motion = average(summaries);
        const auto& dist = tracking[key];
        double sum = 0.0;
        for (double d : dist)
            sum += d;
        row.tracking_distance_mm = dist.empty() ? std::nan("") : 1000.0 * sum / static_cast<double>(dist.size());
        report.hand_kinematics.push_back(row);
    }
    for (const auto& [cond, summaries] : head) {
        report.head_kinematics.push_back({cond, summaries.size(), average(summaries)});
    }

    for (const auto& [key, points] : landings) {
        report.displacement.push_back({key.condition(), key.pad, group_stats(std::span<const Vec2>(points))});
        report.diameters.push_back(
            {key.condition(), key.pad, points.size(), containment_diameter(points, opt.quantile, opt.center)});
        RegressionRow reg;
        reg.condition = key.condition();
        reg.pad = key.pad;
        reg.n = points.size();
        try {
            reg.fit = landing_axis_regression(points);
        } catch (const std::domain_error& e) {
            reg.note = e.what();
        }
        report.regressions.push_back(reg);
    }

    // Paired t-tests between every pair of conditions sharing drone count and hand.
    std::map<std::pair<int, int>, std::vector<GroupKey>> families;
    for (const auto& [key, values] : by_index)
        families[{key.drones, key.pad}].push_back(key);
    for (const auto& [family, keys] : families) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            for (std::size_t j = i + 1; j < keys.size(); ++j) {
                const auto& va = by_index[keys[i]];
                const auto& vb = by_index[keys[j]];
                std::vector<double> a;
                std::vector<double> b;
                for (const auto& [index, value] : va) {
                    if (auto it = vb.find(index); it != vb.end()) {
                        a.push_back(value * 1000.0);
                        b.push_back(it->second * 1000.0);
                    }
                }
                TTestRow row;
                row.drone_count = family.first;
                row.pad = family.second;
                row.a = keys[i].condition();
                row.b = keys[j].condition();
                row.n = a.size();
                try {
                    row.result = paired_t_test(a, b);
                } catch (const std::domain_error& e) {
                    row.note = e.what();
                }
                report.ttests.push_back(row);
            }
        }
    }

    // Repeated-measures ANOVA on per-trial mean displacement; trial index is
    // the repeated unit, factors are drone count and feedback/speed cell.
    std::map<std::tuple<int, int, int>, std::pair<double, int>> unit;  // (index, drones, cell) -> sum, n
    std::set<int> drone_levels;
    std::set<int> cell_levels;
    for (const TrialData& t : trials) {
        const int cell = static_cast<int>(t.condition.feedback) * 2 + static_cast<int>(t.condition.speed);
        drone_levels.insert(t.condition.drone_count);
        cell_levels.insert(cell);
        for (const PadSeries& s : t.pads) {
            if (!s.outcome)
                continue;
            auto& acc = unit[{t.index, t.condition.drone_count, cell}];
            acc.first += s.outcome->displacement.norm() * 1000.0;
            acc.second += 1;
        }
    }
    std::set<int> complete;
    {
        std::map<int, std::size_t> count;
        for (const auto& [k, v] : unit)
            ++count[std::get<0>(k)];
        for (const auto& [index, c] : count) {
            if (c == drone_levels.size() * cell_levels.size())
                complete.insert(index);
        }
    }
    if (complete.size() < 2 || cell_levels.size() < 2) {
        report.anova_design = "not run: needs >= 2 feedback/speed cells and >= 2 trial indices complete in every cell";
    } else if (drone_levels.size() >= 2) {
        std::vector<Observation> obs;
        for (const auto& [k, v] : unit) {
            const auto [index, drones, cell] = k;
            if (complete.count(index))
                obs.push_back({index, drones, cell, v.first / v.second});
        }
        report.anova = rm_anova_two_way(RMDataset(obs), opt.alpha);
        report.anova->effects[0].name = "drones";
        report.anova->effects[1].name = "feedback_speed";
        report.anova->effects[2].name = "drones_x_feedback_speed";
        report.anova_design = "two-way repeated measures; unit = trial index (" + std::to_string(complete.size())
            + "), factors = drone count x feedback/speed; dependent variable = mean displacement (mm)";
    } else {
        std::vector<std::vector<double>> values;
        for (int index : complete) {
            std::vector<double> row;
            for (int cell : cell_levels) {
                const auto& v = unit.at({index, *drone_levels.begin(), cell});
                row.push_back(v.first / v.second);
            }
            values.push_back(row);
        }
        report.anova = rm_anova_one_way(values, opt.alpha);
        report.anova->effects[0].name = "feedback_speed";
        report.anova_design = "one-way repeated measures (single drone count); unit = trial index ("
            + std::to_string(complete.size()) + "), factor = feedback/speed; dependent variable = mean displacement (mm)";
    }
    return report;
}

void write_report(const AnalysisReport& report, const AnalysisOptions& options, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    const auto num = format_number;

    {
        auto out = open_csv(out_dir / "table1_hand_kinematics.csv");
        out << "feedback,speed,drones,hand,trials,velocity_m_s,acceleration_m_s2,jerk_m_s3,snap_m_s4,"
               "tracking_distance_mm\n";
        for (const auto& r : report.hand_kinematics) {
            condition_cells(out, r.condition);
            out << ',' << hand_name(r.pad) << ',' << r.trials << ',' << num(r.motion.mean_speed) << ','
                << num(r.motion.mean_accel) << ',' << num(r.motion.mean_jerk) << ',' << num(r.motion.mean_snap)
                << ',' << num(r.tracking_distance_mm) << '\n';
        }
    }
    {
        auto out = open_csv(out_dir / "table2_head_kinematics.csv");
        out << "feedback,speed,drones,trials,velocity_m_s,acceleration_m_s2,jerk_m_s3,snap_m_s4\n";
        for (const auto& r : report.head_kinematics) {
            condition_cells(out, r.condition);
            out << ',' << r.trials << ',' << num(r.motion.mean_speed) << ',' << num(r.motion.mean_accel) << ','
                << num(r.motion.mean_jerk) << ',' << num(r.motion.mean_snap) << '\n';
        }
    }
    {
        auto out = open_csv(out_dir / "table3_displacement.csv");
        out << "feedback,speed,drones,hand,n,mean_mm,std_mm,max_mm\n";
        for (const auto& r : report.displacement) {
            condition_cells(out, r.condition);
            out << ',' << hand_name(r.pad) << ',' << r.stats.n << ',' << num(r.stats.mean) << ','
                << (r.stats.std_deviation ? num(*r.stats.std_deviation) : "NA") << ',' << num(r.stats.maximum)
                << '\n';
        }
    }
    {
        auto out = open_csv(out_dir / "table4_diameters.csv");
        out << "feedback,speed,drones,hand,n,quantile,center,diameter_m\n";
        for (const auto& r : report.diameters) {
            condition_cells(out, r.condition);
            out << ',' << hand_name(r.pad) << ',' << r.n << ',' << num(options.quantile) << ','
                << to_string(options.center) << ',' << num(r.diameter_m) << '\n';
        }
    }
    {
        auto out = open_csv(out_dir / "anova_report.csv");
        out << "effect,df,error_df,ss,error_ss,F,p,significant,degenerate\n";
        if (report.anova) {
            for (const auto& e : report.anova->effects) {
                out << e.name << ',' << e.df << ',' << e.error_df << ',' << num(e.sum_of_squares) << ','
                    << num(e.error_sum_of_squares) << ',' << num(e.f) << ',' << num(e.p) << ','
                    << (report.anova->significant(e) ? "yes" : "no") << ',' << (e.degenerate ? "yes" : "no")
                    << '\n';
            }
        }
        auto txt = open_csv(out_dir / "anova_report.txt");
        txt << "Repeated-measures ANOVA on landing displacement\n" << report.anova_design << "\n";
        if (report.anova) {
            txt << "alpha = " << num(report.anova->alpha) << "\n\n";
            for (const auto& e : report.anova->effects) {
                char line[256];
                std::snprintf(line, sizeof line, "  %-26s F(%d, %d) = %.3f, p = %.4g  %s%s\n", e.name.c_str(), e.df,
                              e.error_df, e.f, e.p, report.anova->significant(e) ? "significant" : "not significant",
                              e.degenerate ? " (degenerate error term)" : "");
                txt << line;
            }
        }
    }
    {
        auto out = open_csv(out_dir / "ttests.csv");
        out << "drones,hand,condition_a,condition_b,n,t,df,p,significant,note\n";
        for (const auto& r : report.ttests) {
            out << r.drone_count << ',' << hand_name(r.pad) << ',' << condition_name(r.a) << ','
                << condition_name(r.b) << ',' << r.n << ',';
            if (r.result) {
                out << num(r.result->t) << ',' << r.result->df << ',' << num(r.result->p) << ','
                    << (r.result->p < options.alpha ? "yes" : "no") << ",\n";
            } else {
                out << "NA,NA,NA,NA,\"" << r.note << "\"\n";
            }
        }
    }
    {
        auto out = open_csv(out_dir / "regression.csv");
        out << "feedback,speed,drones,hand,n,intercept_m,slope,r_squared,note\n";
        for (const auto& r : report.regressions) {
            condition_cells(out, r.condition);
            out << ',' << hand_name(r.pad) << ',' << r.n << ',';
            if (r.fit)
                out << num(r.fit->intercept) << ',' << num(r.fit->slope) << ',' << num(r.fit->r_squared) << ",\n";
            else
                out << "NA,NA,NA,\"" << r.note << "\"\n";
        }
    }
}

AnalysisReport analyze(const fs::path& log_dir, const fs::path& out_dir, const AnalyzeOptions& options)
{
    AnalysisReport report = analyze_logs(log_dir, options);
    write_report(report, options.analysis, out_dir);
    return report;
}

}  // namespace lumitact
