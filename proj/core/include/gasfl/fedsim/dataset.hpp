#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gasfl/seed.hpp"

namespace gasfl::fedsim {

/// Class-conditional Gaussian blobs. Features are stored row-major (samples x features).
struct SyntheticDataset {
    std::size_t classes = 0;
    std::size_t features = 0;
    std::vector<double> x;
    std::vector<int> y;

    std::size_t size() const noexcept { return y.size(); }
    std::span<const double> row(std::size_t i) const { return {x.data() + i * features, features}; }

    friend bool operator==(const SyntheticDataset&, const SyntheticDataset&) = default;
};

struct DatasetParams {
    std::size_t classes = 10;
    std::size_t features = 64;
    std::size_t per_class = 200;       ///< training samples per class
    std::size_t test_per_class = 200;  ///< held-out samples per class
    double separation = 6.0;           ///< radius of the sphere holding the class centres
    double noise = 1.0;                ///< isotropic per-class noise sigma_x

    friend bool operator==(const DatasetParams&, const DatasetParams&) = default;
};

/// Centres are drawn once; train and test are then sampled independently around them.
std::pair<SyntheticDataset, SyntheticDataset> generate_synthetic(const DatasetParams& params, const SeedSpec& seed);

struct DirichletPartition {
    std::vector<std::vector<std::size_t>> client_indices;
    /// proportions[y][i]: share of class y allotted to client i, before rounding.
    std::vector<std::vector<double>> proportions;
    double beta = 0.0;
};

/// For each class draws (p_1, ..., p_n) ~ Dir(beta), shuffles the class's sample
/// indices and hands out contiguous slices whose sizes are the largest-remainder
/// rounding of p_i * class_size.
DirichletPartition dirichlet_partition(std::span<const int> labels, std::size_t clients, double beta,
                                       const SeedSpec& seed);

/// Largest-remainder rounding of shares * total; ties go to the lower index.
std::vector<std::size_t> largest_remainder_counts(std::span<const double> shares, std::size_t total);

}  // namespace gasfl::fedsim
