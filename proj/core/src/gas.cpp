#include "gasfl/gas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gasfl/error.hpp"
#include "gasfl/parallel.hpp"

namespace gasfl {

std::size_t removal_count(const SelectionMode& mode, std::size_t n) {
    if (const auto* known = std::get_if<KnownF>(&mode)) return known->f;
    const double delta = std::get<Ratio>(mode).delta;
    if (!(delta >= 0.0 && delta < 0.5)) throw PreconditionError("GAS ratio mode requires 0 <= delta < 0.5");
    // Guard against 0.1 * 50 landing a hair above 5.
    const double raw = delta * static_cast<double>(n);
    return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

GroupScores group_scores(std::span<const GradientVector> sub_vectors, const AggregatorSpec& base, std::size_t f,
                         const SeedSpec& seed) {
    GroupScores out;
    out.aggregate = aggregate(base, sub_vectors, f, seed);
    out.scores.reserve(sub_vectors.size());
    for (const auto& g : sub_vectors) out.scores.push_back(distance(g, out.aggregate));
    return out;
}

std::vector<double> total_scores(const ScoreTable& table) {
    detail::require(table.group_scores.size() == table.clients * table.groups, "total_scores: malformed score table");
    std::vector<double> totals(table.clients, 0.0);
    for (std::size_t i = 0; i < table.clients; ++i) {
        double acc = 0.0;
        for (std::size_t q = 0; q < table.groups; ++q) acc += table.at(i, q);
        totals[i] = acc;
    }
    return totals;
}

SelectionResult select_clients(std::span<const double> totals, std::size_t keep_count) {
    const std::size_t n = totals.size();
    if (keep_count < 1 || keep_count > n) {
        throw PreconditionError("select_clients: keep_count " + std::to_string(keep_count) + " outside [1, " +
                                std::to_string(n) + "]");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return totals[a] < totals[b]; });
    order.resize(keep_count);
    std::sort(order.begin(), order.end());
    return SelectionResult{std::move(order), keep_count};
}

GasResult gas_aggregate(const GasConfig& config, std::span<const GradientVector> gradients, std::uint64_t round,
                        unsigned jobs) {
    const std::size_t dim = common_dim(gradients, "gas_aggregate");
    const std::size_t n = gradients.size();
    if (n < 2) throw PreconditionError("GAS requires n >= 2");
    reject_nan(gradients);
    const std::size_t f = removal_count(config.selection, n);
    if (f >= n) throw PreconditionError("GAS requires n - f >= 1");
    check_preconditions(config.base, n, f);

    const SeedSpec partition_seed = config.partition_policy == PartitionPolicy::PerRound
                                        ? config.seed.derive("partition", round)
                                        : config.seed.derive("partition-fixed");
    GasResult result;
    result.partition = make_partition(dim, config.groups, partition_seed);
    const std::size_t p = result.partition.groups();

    result.scores.clients = n;
    result.scores.groups = p;
    result.scores.group_scores.assign(n * p, 0.0);
    parallel_for(p, jobs, [&](std::size_t q) {
        const auto& subset = result.partition.subset(q);
        GradientList subs;
        subs.reserve(n);
        for (const auto& g : gradients) subs.push_back(extract_subvector(g, subset));
        const auto group = group_scores(subs, config.base, f, config.seed.derive("group", round).derive("q", q));
        for (std::size_t i = 0; i < n; ++i) result.scores.group_scores[i * p + q] = group.scores[i];
    });
    result.scores.totals = total_scores(result.scores);
    result.selection = select_clients(result.scores.totals, n - f);
    result.aggregate = mean_of(gradients, result.selection.selected);
    return result;
}

}  // namespace gasfl
