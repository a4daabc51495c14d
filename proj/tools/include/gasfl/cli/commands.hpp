#pragma once

// Subcommands of the gasfl tool. Each returns a process exit code:
// 0 success, 1 check failure, 2 configuration error, 3 runtime error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gasfl/fedsim/simulation.hpp"

namespace gasfl::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct RunOptions {
    std::filesystem::path config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  ///< overrides experiment.seed
    unsigned jobs = 1;
    bool timing = false;  ///< record wall_time; off keeps outputs byte-reproducible
};

struct SweepOptions {
    RunOptions run;
    std::string axis;  ///< p, delta, beta, f or n
    std::vector<std::string> values;
};

struct CertifyOptions {
    std::string rule = "median";
    std::size_t n = 10;
    std::size_t f = 2;
    std::size_t dim = 10;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    double scale = 100.0;
    std::filesystem::path out;  ///< empty: report goes to stdout only
};

struct OracleOptions {
    std::string suite;  ///< a suite name or "all"
    std::uint64_t seed = 0;
    std::size_t instances = 1000;
    bool inject_fault = false;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err);

/// Header plus one row per (repeat, round); numbers at 17 significant digits.
std::string rounds_csv(const fedsim::ExperimentResult& result, bool timing);
std::string summary_text(const fedsim::ExperimentConfig& cfg, const fedsim::ExperimentResult& result);

/// Applies one sweep value to a copy of `base`. Throws ConfigError when the axis
/// does not fit the configured defense or the value does not parse.
fedsim::ExperimentConfig apply_sweep_value(const fedsim::ExperimentConfig& base, const std::string& axis,
                                           const std::string& value, std::size_t index, std::uint64_t master_seed);

}  // namespace gasfl::cli
