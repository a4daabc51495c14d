#include "gasfl/fedsim/synthetic_gradients.hpp"

#include <cmath>

#include "gasfl/error.hpp"

namespace gasfl::fedsim {

namespace {
GradientVector scaled_draw(const SeedSpec& seed, std::size_t dim, double scale) {
    auto rng = seed.engine();
    return GradientVector(normal_vector(rng, dim, scale / std::sqrt(static_cast<double>(dim))));
}
}  // namespace

SyntheticGradientSource::SyntheticGradientSource(SyntheticGradientModel model, std::size_t clients, std::size_t dim,
                                                 const SeedSpec& seed)
    : model_(model), dim_(dim), seed_(seed) {
    detail::require(model.kappa >= 0.0 && model.sigma >= 0.0, "SyntheticGradientModel: kappa and sigma must be >= 0");
    detail::require(dim >= 1 && clients >= 1, "SyntheticGradientSource: need dim >= 1 and clients >= 1");
    global_ = scaled_draw(seed.derive("global"), dim, 1.0);
    shifts_.reserve(clients);
    for (std::size_t i = 0; i < clients; ++i) shifts_.push_back(scaled_draw(seed.derive("shift", i), dim, model.kappa));
}

std::vector<GradientVector> SyntheticGradientSource::sample(std::uint64_t round) const {
    std::vector<GradientVector> out;
    out.reserve(shifts_.size());
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
        GradientVector g = scaled_draw(seed_.derive("noise", round).derive("client", i), dim_, model_.sigma);
        g += global_;
        g += shifts_[i];
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace gasfl::fedsim
