#pragma once

#include <random>
#include <vector>

#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl::testing {

inline GradientList gaussian_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    GradientList out;
    for (std::size_t i = 0; i < n; ++i) {
        GradientVector v(d);
        for (auto& x : v) x = normal(rng);
        out.push_back(std::move(v));
    }
    return out;
}

inline double max_abs_diff(const GradientVector& a, const GradientVector& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

}  // namespace gasfl::testing
