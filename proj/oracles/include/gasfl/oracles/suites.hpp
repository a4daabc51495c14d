#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gasfl::oracles {

/// Outcome of cross-checking one library routine against its reference on many
/// random instances.
struct SuiteReport {
    std::string suite;
    std::size_t instances = 0;
    double max_discrepancy = 0.0;
    double tolerance = 0.0;
    bool passed = true;
    std::uint64_t failing_seed = 0;  ///< instance seed of the first failure
    std::string failure;
};

/// median, trimmed_mean, krum, bulyan, weiszfeld, dnc, gas
const std::vector<std::string>& suite_names();

/// Runs `instances` random instances of the named suite. With `inject_fault` the
/// library output is perturbed by 1e-6 before comparison (negative control).
/// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed, std::size_t instances = 1000,
                      bool inject_fault = false);

}  // namespace gasfl::oracles
