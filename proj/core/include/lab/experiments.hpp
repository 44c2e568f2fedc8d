#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lab/common.hpp"
#include "lab/measures.hpp"

namespace lab {

inline constexpr const char* kArtifactVersion = "0.1.0";

// One experiment run: which study, its parameters, and where results go.
// Parameters are validated against the wrapped operations' preconditions
// before any compute starts.
struct ExperimentConfig {
    std::string experiment;        // decay, m_scan, threshold, alpha0, vdc, whitney, tubes, rect
    nlohmann::json parameters;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir;
    std::size_t atom_budget = kDefaultAtomBudget;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

struct RunManifest {
    nlohmann::json config;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<bool> converged;   // per-block node-doubling flags
    bool pass = false;
    nlohmann::json summary;
};

// Executes the experiment and writes results.csv, summary.json, plot.svg
// (when the experiment produces a log-log series) and manifest.json into
// config.output_dir. On error, partial outputs are removed and the manifest
// records the failure before the exception propagates.
RunManifest run(const ExperimentConfig& config);

// One table row per run directory: experiment, parameters, measured exponent,
// predicted exponent, pass/fail. Manifests from other artifact versions get a
// warning column instead of a failure.
std::string report(const std::vector<std::filesystem::path>& run_dirs);

}  // namespace lab
