#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gasfl/vector.hpp"

namespace gasfl::fedsim {

/// ||aggregate - mean(honest)||.
double deviation_metric(const GradientVector& aggregate, std::span<const GradientVector> honest);

struct InclusionMetrics {
    double honest_ratio = 0.0;    ///< |selected ∩ honest| / |honest|
    std::size_t byz_count = 0;    ///< |selected ∩ byzantine|
};

/// `is_byzantine[i]` flags position i of the aggregated list.
InclusionMetrics inclusion_metrics(std::span<const std::size_t> selected, const std::vector<char>& is_byzantine);

}  // namespace gasfl::fedsim
