#pragma once

// Experiment configs are YAML documents with the sections experiment, dataset,
// trainer, attack and defense. emit_config writes the canonical form: every key
// present, fixed key order, two-space indent, doubles in shortest round-trip
// notation. Parsing a canonical document and emitting it again reproduces it
// byte for byte.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "gasfl/fedsim/simulation.hpp"

namespace gasfl::cli {

inline constexpr std::string_view kArtifactVersion = "0.3.0";

/// Throws ConfigError naming the offending key (e.g. "defense.groups").
fedsim::ExperimentConfig parse_config(std::string_view yaml_text);
fedsim::ExperimentConfig load_config(const std::filesystem::path& path);
std::string emit_config(const fedsim::ExperimentConfig& cfg);

/// What a run used and produced. Output paths are relative to the run directory so
/// manifests of identical runs are identical.
struct RunManifest {
    fedsim::ExperimentConfig config;
    std::string artifact_version{kArtifactVersion};
    std::uint64_t master_seed = 0;
    std::string csv_path = "rounds.csv";
    std::string summary_path = "summary.txt";
};

RunManifest parse_manifest(std::string_view yaml_text);
std::string emit_manifest(const RunManifest& manifest);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace gasfl::cli
