#include "gasfl/partition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gasfl/error.hpp"

namespace gasfl {

IndexPartition::IndexPartition(std::size_t dim, std::vector<std::vector<std::size_t>> subsets)
    : dim_(dim), subsets_(std::move(subsets)) {}

bool IndexPartition::is_valid() const {
    if (dim_ == 0 || subsets_.empty()) return false;
    const std::size_t p = subsets_.size();
    const std::size_t lo = dim_ / p;
    const std::size_t hi = (dim_ + p - 1) / p;
    std::vector<char> seen(dim_, 0);
    std::size_t total = 0;
    for (const auto& s : subsets_) {
        if (s.size() < lo || s.size() > hi) return false;
        for (std::size_t j : s) {
            if (j >= dim_ || seen[j]) return false;
            seen[j] = 1;
        }
        total += s.size();
    }
    return total == dim_;
}

IndexPartition make_partition(std::size_t dim, std::size_t groups, const SeedSpec& seed) {
    if (dim == 0) throw PreconditionError("make_partition: empty dimension");
    if (groups == 0) throw PreconditionError("make_partition: group count must be >= 1");
    const std::size_t p = std::min(groups, dim);

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = seed.engine();
    std::shuffle(order.begin(), order.end(), rng);

    const std::size_t base = dim / p;
    const std::size_t extra = dim % p;
    std::vector<std::vector<std::size_t>> subsets(p);
    std::size_t cursor = 0;
    for (std::size_t q = 0; q < p; ++q) {
        const std::size_t size = base + (q < extra ? 1 : 0);
        subsets[q].assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                          order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
        std::sort(subsets[q].begin(), subsets[q].end());
        cursor += size;
    }
    return IndexPartition(dim, std::move(subsets));
}

GradientVector extract_subvector(const GradientVector& g, const std::vector<std::size_t>& subset) {
    GradientVector out(subset.size());
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const std::size_t j = subset[k];
        if (j >= g.dim()) {
            throw PreconditionError("extract_subvector: index " + std::to_string(j) + " out of range for dim " +
                                    std::to_string(g.dim()));
        }
        out[k] = g[j];
    }
    return out;
}

GradientVector reassemble(const IndexPartition& partition, const std::vector<GradientVector>& parts) {
    detail::require(parts.size() == partition.groups(), "reassemble: part count does not match group count");
    GradientVector out(partition.dim());
    for (std::size_t q = 0; q < parts.size(); ++q) {
        const auto& subset = partition.subset(q);
        detail::require(parts[q].dim() == subset.size(), "reassemble: part size does not match subset size");
        for (std::size_t k = 0; k < subset.size(); ++k) out[subset[k]] = parts[q][k];
    }
    return out;
}

}  // namespace gasfl
