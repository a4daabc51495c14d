#include "gasfl/linalg.hpp"

#include <cmath>

namespace gasfl {

namespace {
double normalize(std::vector<double>& v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return norm;
}
}  // namespace

std::vector<double> power_iteration(const SquareMatrix& m, int iterations, const SeedSpec& seed) {
    auto rng = seed.engine();
    std::vector<double> u = normal_vector(rng, m.n);
    normalize(u);
    std::vector<double> next(m.n);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t r = 0; r < m.n; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < m.n; ++c) acc += m(r, c) * u[c];
            next[r] = acc;
        }
        if (normalize(next) == 0.0) break;
        u.swap(next);
    }
    return u;
}

}  // namespace gasfl
