#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl::fedsim {

/// Direct generator of heterogeneous honest gradients, no training involved.
///
/// g_i(t) = g* + kappa * h_i + sigma * xi_i(t), where g*, h_i and xi_i(t) are
/// N(0, I/d) draws (unit expected squared norm). h_i is fixed per client; xi is
/// redrawn every round.
struct SyntheticGradientModel {
    double kappa = 1.0;
    double sigma = 0.5;
};

class SyntheticGradientSource {
public:
    SyntheticGradientSource(SyntheticGradientModel model, std::size_t clients, std::size_t dim, const SeedSpec& seed);

    std::vector<GradientVector> sample(std::uint64_t round) const;

    const GradientVector& global_gradient() const noexcept { return global_; }

private:
    SyntheticGradientModel model_;
    std::size_t dim_;
    SeedSpec seed_;
    GradientVector global_;
    std::vector<GradientVector> shifts_;
};

}  // namespace gasfl::fedsim
