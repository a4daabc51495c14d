#include "gasfl/fedsim/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gasfl/error.hpp"

namespace gasfl::fedsim {

namespace {
SyntheticDataset sample_blobs(const std::vector<std::vector<double>>& centres, std::size_t per_class, double noise,
                              std::mt19937_64& rng) {
    SyntheticDataset out;
    out.classes = centres.size();
    out.features = centres.front().size();
    out.x.reserve(out.classes * per_class * out.features);
    out.y.reserve(out.classes * per_class);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t c = 0; c < out.classes; ++c) {
        for (std::size_t s = 0; s < per_class; ++s) {
            for (double mu : centres[c]) out.x.push_back(mu + noise * gauss(rng));
            out.y.push_back(static_cast<int>(c));
        }
    }
    return out;
}
}  // namespace

std::pair<SyntheticDataset, SyntheticDataset> generate_synthetic(const DatasetParams& params, const SeedSpec& seed) {
    detail::require(params.classes >= 2, "generate_synthetic: need at least 2 classes");
    detail::require(params.features >= 1, "generate_synthetic: need at least 1 feature");
    auto centre_rng = seed.derive("centres").engine();
    std::vector<std::vector<double>> centres(params.classes);
    for (auto& c : centres) {
        c = normal_vector(centre_rng, params.features);
        double norm = 0.0;
        for (double v : c) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : c) v = norm > 0.0 ? v * params.separation / norm : 0.0;
    }
    auto train_rng = seed.derive("train").engine();
    auto test_rng = seed.derive("test").engine();
    return {sample_blobs(centres, params.per_class, params.noise, train_rng),
            sample_blobs(centres, params.test_per_class, params.noise, test_rng)};
}

std::vector<std::size_t> largest_remainder_counts(std::span<const double> shares, std::size_t total) {
    const std::size_t n = shares.size();
    std::vector<std::size_t> counts(n);
    std::vector<double> fractional(n);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = shares[i] * static_cast<double>(total);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        fractional[i] = exact - std::floor(exact);
        assigned += counts[i];
    }
    // Floating error can push the floors past the total; trim from the largest.
    while (assigned > total) {
        const auto it = std::max_element(counts.begin(), counts.end());
        --*it;
        --assigned;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fractional[a] > fractional[b]; });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % n, ++assigned) ++counts[order[k]];
    return counts;
}

DirichletPartition dirichlet_partition(std::span<const int> labels, std::size_t clients, double beta,
                                       const SeedSpec& seed) {
    detail::require(clients >= 1, "dirichlet_partition: need at least one client");
    detail::require(beta > 0.0, "dirichlet_partition: beta must be > 0");
    int max_label = -1;
    for (int y : labels) max_label = std::max(max_label, y);
    const auto classes = static_cast<std::size_t>(max_label + 1);

    DirichletPartition out;
    out.beta = beta;
    out.client_indices.resize(clients);
    out.proportions.resize(classes);
    for (std::size_t y = 0; y < classes; ++y) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == static_cast<int>(y)) members.push_back(i);

        auto rng = seed.derive("class", y).engine();
        std::gamma_distribution<double> gamma(beta, 1.0);
        std::vector<double> shares(clients);
        double total = 0.0;
        for (double& s : shares) total += (s = gamma(rng));
        if (total > 0.0) {
            for (double& s : shares) s /= total;
        } else {
            std::fill(shares.begin(), shares.end(), 1.0 / static_cast<double>(clients));
        }
        std::shuffle(members.begin(), members.end(), rng);

        const auto counts = largest_remainder_counts(shares, members.size());
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < clients; ++i) {
            auto& dst = out.client_indices[i];
            dst.insert(dst.end(), members.begin() + static_cast<std::ptrdiff_t>(cursor),
                       members.begin() + static_cast<std::ptrdiff_t>(cursor + counts[i]));
            cursor += counts[i];
        }
        out.proportions[y] = std::move(shares);
    }
    for (auto& idx : out.client_indices) std::sort(idx.begin(), idx.end());
    return out;
}

}  // namespace gasfl::fedsim
