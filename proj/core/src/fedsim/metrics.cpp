#include "gasfl/fedsim/metrics.hpp"

#include "gasfl/error.hpp"

namespace gasfl::fedsim {

double deviation_metric(const GradientVector& aggregate, std::span<const GradientVector> honest) {
    detail::require(!honest.empty(), "deviation_metric: no honest gradients");
    return distance(aggregate, mean(honest));
}

InclusionMetrics inclusion_metrics(std::span<const std::size_t> selected, const std::vector<char>& is_byzantine) {
    std::size_t honest_total = 0;
    for (char b : is_byzantine)
        if (!b) ++honest_total;
    InclusionMetrics m;
    std::size_t honest_selected = 0;
    for (std::size_t i : selected) {
        detail::require(i < is_byzantine.size(), "inclusion_metrics: selected index out of range");
        if (is_byzantine[i])
            ++m.byz_count;
        else
            ++honest_selected;
    }
    m.honest_ratio = honest_total == 0 ? 0.0 : static_cast<double>(honest_selected) / static_cast<double>(honest_total);
    return m;
}

}  // namespace gasfl::fedsim
