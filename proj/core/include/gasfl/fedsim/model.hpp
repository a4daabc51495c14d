#pragma once

#include <cstddef>
#include <span>

#include "gasfl/fedsim/dataset.hpp"
#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl::fedsim {

/// Softmax linear classifier when hidden == 0, otherwise a one-hidden-layer tanh MLP.
///
/// Flattening: softmax is [W (classes x features, row-major), b (classes)], so
/// d = C*m + C. The MLP is [W1 (hidden x features), b1, W2 (classes x hidden), b2].
struct ModelArch {
    std::size_t classes = 10;
    std::size_t features = 64;
    std::size_t hidden = 0;

    std::size_t param_count() const noexcept;
    friend bool operator==(const ModelArch&, const ModelArch&) = default;
};

/// Zeros for softmax; scaled Gaussian weights and zero biases for the MLP.
GradientVector init_params(const ModelArch& arch, const SeedSpec& seed);

/// Mean cross-entropy over `rows` and its gradient, written to `grad` (size d).
/// `labels` is indexed by dataset row, so callers can substitute relabelled data.
double loss_and_gradient(const ModelArch& arch, std::span<const double> w, const SyntheticDataset& data,
                         std::span<const int> labels, std::span<const std::size_t> rows, std::span<double> grad);

double loss(const ModelArch& arch, std::span<const double> w, const SyntheticDataset& data,
            std::span<const int> labels, std::span<const std::size_t> rows);

/// Class with the largest logit; ties go to the lower class.
int predict(const ModelArch& arch, std::span<const double> w, std::span<const double> features);

double accuracy(const ModelArch& arch, std::span<const double> w, const SyntheticDataset& data);

}  // namespace gasfl::fedsim
