#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lumitact/config.hpp"
#include "lumitact/trial.hpp"

namespace lumitact {

/// Trial seed: SplitMix64 chain over (base_seed, feedback, speed, drones, index).
std::uint64_t trial_seed(std::uint64_t base_seed, const ConditionSpec& condition, int index);

std::string trial_file_name(const ConditionSpec& condition, int index);

/// Policies for every pad of a condition.
std::vector<PolicyConfig> policies_for(const ConditionSpec& condition, const CombinedPolicyParams& params);

struct ManifestEntry {
    std::string file;
    ConditionSpec condition;
    int index = 0;
    std::uint64_t seed = 0;
    bool timed_out = false;
    std::vector<DroneOutcome> outcomes;
};

struct Manifest {
    std::uint64_t base_seed = 0;
    AnalysisOptions analysis;
    std::vector<ManifestEntry> trials;
};

inline constexpr const char* kManifestFile = "manifest.json";

/// Runs every condition x trial, writes one log per trial and the manifest
/// into config.output_dir. Trials run on up to config.workers threads; the
/// output does not depend on the worker count.
Manifest run_batch(const ExperimentConfig& config);

Manifest load_manifest(const std::filesystem::path& path);

}  // namespace lumitact
