#pragma once

#include <cstddef>
#include <vector>

#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl {

/// Disjoint cover of {0, ..., d-1} by p index sets; each set is sorted ascending.
class IndexPartition {
public:
    IndexPartition() = default;
    IndexPartition(std::size_t dim, std::vector<std::vector<std::size_t>> subsets);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t groups() const noexcept { return subsets_.size(); }
    const std::vector<std::size_t>& subset(std::size_t q) const { return subsets_.at(q); }
    const std::vector<std::vector<std::size_t>>& subsets() const noexcept { return subsets_; }

    /// True iff the sets are disjoint, cover [0, d) and have sizes in [floor(d/p), ceil(d/p)].
    bool is_valid() const;

    friend bool operator==(const IndexPartition&, const IndexPartition&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::vector<std::size_t>> subsets_;
};

/// Uniformly random partition: shuffle 0..d-1 with the seeded stream, then cut into
/// p contiguous chunks. The first d mod p chunks receive ceil(d/p) indices. p > d is
/// clamped to d. Throws PreconditionError for d == 0 or p == 0.
IndexPartition make_partition(std::size_t dim, std::size_t groups, const SeedSpec& seed);

/// (g[j1], ..., g[jk]) for the indices of `subset` in ascending order.
GradientVector extract_subvector(const GradientVector& g, const std::vector<std::size_t>& subset);

/// Inverse of extract_subvector over a whole partition.
GradientVector reassemble(const IndexPartition& partition, const std::vector<GradientVector>& parts);

}  // namespace gasfl
