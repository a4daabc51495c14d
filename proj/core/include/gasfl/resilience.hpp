#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gasfl/aggregators.hpp"
#include "gasfl/seed.hpp"

namespace gasfl {

enum class AdversaryPlacement {
    DistantCluster,  ///< adversaries around honest-mean + scale * u for a random unit u
    HonestMean,      ///< adversaries exactly at the honest mean
};

struct ResilienceOptions {
    double adversary_scale = 100.0;
    AdversaryPlacement placement = AdversaryPlacement::DistantCluster;
};

/// Empirical (f, lambda)-resilience estimate over random adversarial instances.
struct ResilienceReport {
    std::size_t n = 0;
    std::size_t f = 0;
    std::size_t dim = 0;
    std::size_t trials = 0;
    std::size_t skipped = 0;
    double lambda_hat = 0.0;
    std::vector<double> ratios;
};

/// For each trial draws n-f unit-Gaussian honest points S and f adversarial points,
/// and records ||A(x) - mean(S)|| / max_{i,i' in S} ||x_i - x_i'||. Trials whose
/// honest points all coincide are skipped and counted.
ResilienceReport estimate_resilience(const AggregatorSpec& spec, std::size_t n, std::size_t f, std::size_t dim,
                                     std::size_t trials, const SeedSpec& seed, const ResilienceOptions& options = {});

/// Ratio for one fixed instance; `honest` holds the indices of S. Empty when the
/// honest points coincide.
std::optional<double> resilience_ratio(const AggregatorSpec& spec, std::span<const GradientVector> points,
                        std::span<const std::size_t> honest, std::size_t f, const SeedSpec& seed);

}  // namespace gasfl
