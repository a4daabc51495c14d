#include "gasfl/fedsim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gasfl/error.hpp"

namespace gasfl::fedsim {

GradientVector local_train(const ModelArch& arch, const GradientVector& start, const SyntheticDataset& data,
                           std::span<const std::size_t> shard, const TrainerConfig& cfg, bool flip_labels,
                           const SeedSpec& seed) {
    detail::require(!shard.empty(), "local_train: empty shard");
    detail::require(cfg.batch_size >= 1, "local_train: batch_size must be >= 1");
    detail::require(!cfg.clip_norm || *cfg.clip_norm > 0.0, "local_train: clip_norm must be > 0 when enabled");

    std::vector<int> flipped;
    std::span<const int> labels = data.y;
    if (flip_labels) {
        flipped.resize(data.y.size());
        const int top = static_cast<int>(data.classes) - 1;
        std::transform(data.y.begin(), data.y.end(), flipped.begin(), [top](int y) { return top - y; });
        labels = flipped;
    }

    const std::size_t d = start.dim();
    std::vector<double> w(start.begin(), start.end());
    std::vector<double> grad(d), buffer(d, 0.0);
    std::vector<std::size_t> order(shard.begin(), shard.end());
    bool first_step = true;
    for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        auto rng = seed.derive("epoch", epoch).engine();
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t lo = 0; lo < order.size(); lo += cfg.batch_size) {
            const std::size_t hi = std::min(order.size(), lo + cfg.batch_size);
            const std::span<const std::size_t> batch(order.data() + lo, hi - lo);
            loss_and_gradient(arch, w, data, labels, batch, grad);
            if (cfg.clip_norm) {
                double norm = 0.0;
                for (double g : grad) norm += g * g;
                norm = std::sqrt(norm);
                if (norm > *cfg.clip_norm) {
                    const double scale = *cfg.clip_norm / norm;
                    for (double& g : grad) g *= scale;
                }
            }
            for (std::size_t k = 0; k < d; ++k) {
                const double step = grad[k] + cfg.weight_decay * w[k];
                buffer[k] = first_step ? step : cfg.momentum * buffer[k] + step;
                w[k] -= cfg.learning_rate * buffer[k];
            }
            first_step = false;
        }
    }
    GradientVector delta(d);
    for (std::size_t k = 0; k < d; ++k) delta[k] = start[k] - w[k];
    return delta;
}

}  // namespace gasfl::fedsim
