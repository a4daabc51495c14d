#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl {

namespace rules {
struct Mean {};
struct Median {};
struct TrimmedMean {};
struct MultiKrum {};
struct Bulyan {};
/// Smoothed Weiszfeld iterations (RFA).
struct GeometricMedian {
    int iters = 3;
    double smoothing = 1e-8;
};
/// Divide-and-conquer spectral filter.
struct Dnc {
    double c = 4.0;
    int niters = 1;
    std::size_t b = 10000;
};
}  // namespace rules

/// Tagged descriptor selecting an aggregation rule and its hyperparameters.
using AggregatorSpec = std::variant<rules::Mean, rules::Median, rules::TrimmedMean, rules::MultiKrum, rules::Bulyan,
                                    rules::GeometricMedian, rules::Dnc>;

/// Canonical lower-case name: mean, median, trimmed_mean, multi_krum, bulyan,
/// geometric_median, dnc.
std::string_view rule_name(const AggregatorSpec& spec) noexcept;

/// Inverse of rule_name with default hyperparameters. Throws ConfigError on unknown names.
AggregatorSpec aggregator_from_name(std::string_view name);

/// An aggregate plus the clients the rule actually averaged. Rules without an
/// explicit selection (Mean, Median, TrimmedMean, GeometricMedian) report every
/// client.
struct Aggregate {
    GradientVector value;
    std::vector<std::size_t> selected;
};

GradientVector coordinate_median(std::span<const GradientVector> gradients);
GradientVector coordinate_trimmed_mean(std::span<const GradientVector> gradients, std::size_t f);

/// Krum score of every client: sum of squared distances to its n-f-2 nearest neighbours.
std::vector<double> krum_scores(std::span<const GradientVector> gradients, std::size_t f);
Aggregate multi_krum(std::span<const GradientVector> gradients, std::size_t f);

/// `selected` is returned in the order Krum picked the clients.
Aggregate bulyan(std::span<const GradientVector> gradients, std::size_t f);

GradientVector geometric_median(std::span<const GradientVector> gradients, int iters, double smoothing);

Aggregate dnc(std::span<const GradientVector> gradients, std::size_t f, const rules::Dnc& params, const SeedSpec& seed);

/// Dispatches to the rule selected by `spec`. `seed` is consumed only by DnC.
Aggregate aggregate_detailed(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                             const SeedSpec& seed = SeedSpec{});

GradientVector aggregate(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                         const SeedSpec& seed = SeedSpec{});

/// Bucketing: permute clients with `seed`, average ceil(n/s) consecutive buckets of
/// at most s clients, then apply `spec` to the bucket means with Byzantine count
/// min(f, buckets - 1). `selected` lists the clients of every selected bucket.
Aggregate bucketing_wrap(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                         std::size_t bucket_size, const SeedSpec& seed);

/// Throws PreconditionError naming the rule when (n, f) is not admissible.
void check_preconditions(const AggregatorSpec& spec, std::size_t n, std::size_t f);

}  // namespace gasfl
