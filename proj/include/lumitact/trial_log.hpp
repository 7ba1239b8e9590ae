#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "lumitact/trial.hpp"

namespace lumitact {

inline constexpr int kLogSchemaVersion = 1;

// Line-delimited JSON: one header record, one record per sample, and a
// trailing outcome record. Units are SI (m, s, rad); amplitudes are fractions.
nlohmann::json header_record(const TrialMetadata& meta);
nlohmann::json sample_record(const LogSample& sample);
nlohmann::json outcome_record(const TrialLog& log);

void write_trial_log(std::ostream& out, const TrialLog& log);
std::string trial_log_text(const TrialLog& log);
void save_trial_log(const std::filesystem::path& path, const TrialLog& log);

struct LogReadOptions {
    bool strict = false;  // fail on the first corrupt line instead of skipping it
};

/// Parses a trial log. In lenient mode corrupt sample lines are skipped and
/// described in `warnings`; a missing header is always fatal.
TrialLog read_trial_log(std::istream& in, const LogReadOptions& options = {},
                        std::vector<std::string>* warnings = nullptr);
TrialLog load_trial_log(const std::filesystem::path& path, const LogReadOptions& options = {},
                        std::vector<std::string>* warnings = nullptr);

}  // namespace lumitact
