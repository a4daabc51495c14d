#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "gasfl/fedsim/dataset.hpp"
#include "gasfl/fedsim/model.hpp"
#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl::fedsim {

struct TrainerConfig {
    std::size_t local_epochs = 1;
    std::size_t batch_size = 64;
    double learning_rate = 0.1;
    double momentum = 0.5;
    double weight_decay = 1e-4;
    std::optional<double> clip_norm = 2.0;

    friend bool operator==(const TrainerConfig&, const TrainerConfig&) = default;
};

/// Local SGD from `start` over the client's shard; returns start - end.
///
/// Each epoch reshuffles the shard with seed.derive("epoch", e) and walks it in
/// minibatches (the last one may be short). Per batch: loss gradient, clipped to
/// clip_norm, plus weight_decay * w, fed through a heavy-ball momentum buffer
/// (first step initialises the buffer), then w -= lr * buffer. With `flip_labels`
/// every label y becomes C-1-y.
GradientVector local_train(const ModelArch& arch, const GradientVector& start, const SyntheticDataset& data,
                           std::span<const std::size_t> shard, const TrainerConfig& cfg, bool flip_labels,
                           const SeedSpec& seed);

}  // namespace gasfl::fedsim
