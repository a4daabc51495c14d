#include "gasfl/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gasfl/error.hpp"

namespace gasfl {

std::optional<double> resilience_ratio(const AggregatorSpec& spec, std::span<const GradientVector> points,
                                       std::span<const std::size_t> honest, std::size_t f, const SeedSpec& seed) {
    double diameter = 0.0;
    for (std::size_t a = 0; a < honest.size(); ++a)
        for (std::size_t b = a + 1; b < honest.size(); ++b)
            diameter = std::max(diameter, distance(points[honest[a]], points[honest[b]]));
    if (diameter == 0.0) return std::nullopt;
    const GradientVector reference = mean_of(points, honest);
    const GradientVector output = aggregate(spec, points, f, seed);
    return distance(output, reference) / diameter;
}

ResilienceReport estimate_resilience(const AggregatorSpec& spec, std::size_t n, std::size_t f, std::size_t dim,
                                     std::size_t trials, const SeedSpec& seed, const ResilienceOptions& options) {
    detail::require(trials >= 1, "estimate_resilience: trials must be >= 1");
    detail::require(dim >= 1, "estimate_resilience: dim must be >= 1");
    check_preconditions(spec, n, f);

    ResilienceReport report;
    report.n = n;
    report.f = f;
    report.dim = dim;
    report.trials = trials;

    std::vector<std::size_t> honest(n - f);
    std::iota(honest.begin(), honest.end(), std::size_t{0});
    for (std::size_t t = 0; t < trials; ++t) {
        const SeedSpec trial_seed = seed.derive("trial", t);
        auto rng = trial_seed.engine();
        GradientList points;
        points.reserve(n);
        for (std::size_t i = 0; i < n - f; ++i) points.emplace_back(normal_vector(rng, dim));
        const GradientVector honest_mean = mean_of(points, honest);
        if (options.placement == AdversaryPlacement::HonestMean) {
            for (std::size_t i = 0; i < f; ++i) points.push_back(honest_mean);
        } else {
            GradientVector direction(normal_vector(rng, dim));
            const double norm = l2_norm(direction);
            if (norm > 0.0) direction *= options.adversary_scale / norm;
            for (std::size_t i = 0; i < f; ++i)
                points.push_back(honest_mean + direction + GradientVector(normal_vector(rng, dim)));
        }
        const auto ratio = resilience_ratio(spec, points, honest, f, trial_seed.derive("rule"));
        if (!ratio) {
            ++report.skipped;
            continue;
        }
        report.ratios.push_back(*ratio);
        report.lambda_hat = std::max(report.lambda_hat, *ratio);
    }
    return report;
}

}  // namespace gasfl
