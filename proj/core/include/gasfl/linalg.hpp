#pragma once

#include <cstddef>
#include <vector>

#include "gasfl/seed.hpp"

namespace gasfl {

/// Row-major dense square matrix; only what the spectral filter needs.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    explicit SquareMatrix(std::size_t size = 0) : n(size), data(size * size, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

/// Leading eigenvector of a symmetric positive semidefinite matrix by power
/// iteration from a seeded Gaussian start. Returns a unit vector (the start vector
/// if the matrix annihilates it).
std::vector<double> power_iteration(const SquareMatrix& m, int iterations, const SeedSpec& seed);

}  // namespace gasfl
