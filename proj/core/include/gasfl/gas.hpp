#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "gasfl/aggregators.hpp"
#include "gasfl/partition.hpp"
#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl {

/// Server knows the Byzantine count and keeps n - f clients.
struct KnownF {
    std::size_t f = 0;
};
/// Server removes ceil(delta * n) clients, delta in [0, 0.5).
struct Ratio {
    double delta = 0.0;
};
using SelectionMode = std::variant<KnownF, Ratio>;

enum class PartitionPolicy { PerRound, Fixed };

struct GasConfig {
    std::size_t groups = 1;
    AggregatorSpec base = rules::Median{};
    SelectionMode selection = KnownF{};
    PartitionPolicy partition_policy = PartitionPolicy::PerRound;
    SeedSpec seed;
};

/// n x p identification scores (row-major) and their row totals.
struct ScoreTable {
    std::size_t clients = 0;
    std::size_t groups = 0;
    std::vector<double> group_scores;
    std::vector<double> totals;

    double at(std::size_t client, std::size_t group) const { return group_scores[client * groups + group]; }
};

struct SelectionResult {
    std::vector<std::size_t> selected;  ///< ascending client indices
    std::size_t keep_count = 0;
};

struct GroupScores {
    GradientVector aggregate;
    std::vector<double> scores;
};

struct GasResult {
    GradientVector aggregate;
    ScoreTable scores;
    SelectionResult selection;
    IndexPartition partition;
};

/// Number of clients the mode removes (and the f handed to the base rule).
std::size_t removal_count(const SelectionMode& mode, std::size_t n);

/// Robust aggregate of one group of sub-vectors and every client's l2 distance to it.
GroupScores group_scores(std::span<const GradientVector> sub_vectors, const AggregatorSpec& base, std::size_t f,
                         const SeedSpec& seed = SeedSpec{});

/// Row sums of the table, accumulated in ascending group order.
std::vector<double> total_scores(const ScoreTable& table);

/// The keep_count lowest totals; ties go to the lower index.
SelectionResult select_clients(std::span<const double> totals, std::size_t keep_count);

/// Split, score per group, sum, select and average. With PerRound policy the partition
/// is drawn from config.seed derived by `round`. Groups are scored on up to `jobs`
/// threads; the result does not depend on `jobs`.
GasResult gas_aggregate(const GasConfig& config, std::span<const GradientVector> gradients, std::uint64_t round,
                        unsigned jobs = 1);

}  // namespace gasfl
