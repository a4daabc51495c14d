#pragma once

// Straight-line reference implementations. Each one is written independently of
// the library routine it checks: full sorts instead of selection, explicit pair
// enumeration, dense eigensolvers.

#include <cstddef>
#include <vector>

#include "gasfl/linalg.hpp"
#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl::oracles {

GradientVector median_by_sort(const GradientList& g);
GradientVector trimmed_mean_by_sort(const GradientList& g, std::size_t f);

/// Every unordered pair's squared distance is enumerated once, then each client's
/// list is fully sorted.
std::vector<double> krum_scores_brute(const GradientList& g, std::size_t f);

struct BulyanTrace {
    std::vector<std::size_t> picked;
    GradientVector value;
};
BulyanTrace bulyan_reference(const GradientList& g, std::size_t f);

/// Plain Weiszfeld iterates z_0 (mean) ... z_T.
std::vector<GradientVector> weiszfeld_iterates(const GradientList& g, int iters, double smoothing);
double sum_of_distances(const GradientList& g, const GradientVector& z);

/// Leading eigenvector from a dense symmetric eigensolver.
std::vector<double> top_eigenvector_dense(const SquareMatrix& m);

/// Gram matrix of the mean-centred rows.
SquareMatrix centred_gram(const GradientList& g);

/// Shuffle with seed.derive("bucketing"), chunk by s, average each chunk.
GradientList bucket_means_reference(const GradientList& g, std::size_t s, const SeedSpec& seed);

}  // namespace gasfl::oracles
