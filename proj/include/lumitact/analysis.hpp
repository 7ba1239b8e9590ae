#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lumitact/config.hpp"
#include "lumitact/inference.hpp"
#include "lumitact/kinemetrics.hpp"
#include "lumitact/landing_metrics.hpp"

namespace lumitact {

struct HandKinematicsRow {
    ConditionSpec condition;
    int pad = 0;
    std::size_t trials = 0;
    MotionSummary motion;
    double tracking_distance_mm = 0.0;
};

struct HeadKinematicsRow {
    ConditionSpec condition;
    std::size_t trials = 0;
    MotionSummary motion;
};

struct DisplacementRow {
    ConditionSpec condition;
    int pad = 0;
    DisplacementStats stats;
};

struct DiameterRow {
    ConditionSpec condition;
    int pad = 0;
    std::size_t n = 0;
    double diameter_m = 0.0;
};

struct TTestRow {
    int drone_count = 1;
    int pad = 0;
    ConditionSpec a;
    ConditionSpec b;
    std::size_t n = 0;
    std::optional<TTestResult> result;
    std::string note;
};

struct RegressionRow {
    ConditionSpec condition;
    int pad = 0;
    std::size_t n = 0;
    std::optional<AxisFit> fit;
    std::string note;
};

struct AnalysisReport {
    std::vector<HandKinematicsRow> hand_kinematics;
    std::vector<HeadKinematicsRow> head_kinematics;
    std::vector<DisplacementRow> displacement;
    std::vector<DiameterRow> diameters;
    std::optional<AnovaTable> anova;
    std::string anova_design;  // description, or why no ANOVA was run
    std::vector<TTestRow> ttests;
    std::vector<RegressionRow> regressions;
    std::size_t trials = 0;
    std::vector<std::string> warnings;
};

struct AnalyzeOptions {
    AnalysisOptions analysis;
    bool strict = false;
};

/// Reads every *.jsonl trial log in `log_dir` (logs are the only input) and
/// computes the report tables.
AnalysisReport analyze_logs(const std::filesystem::path& log_dir, const AnalyzeOptions& options);

/// Writes table1_hand_kinematics.csv, table2_head_kinematics.csv,
/// table3_displacement.csv, table4_diameters.csv, anova_report.csv,
/// anova_report.txt, ttests.csv and regression.csv.
void write_report(const AnalysisReport& report, const AnalysisOptions& options,
                  const std::filesystem::path& out_dir);

/// analyze_logs followed by write_report.
AnalysisReport analyze(const std::filesystem::path& log_dir, const std::filesystem::path& out_dir,
                       const AnalyzeOptions& options);

/// Shortest round-trip decimal form used in every report.
std::string format_number(double value);

}  // namespace lumitact
