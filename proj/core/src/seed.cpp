#include "gasfl/seed.hpp"

namespace gasfl {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {
// FNV-1a over the label bytes.
std::uint64_t hash_label(const std::string& label) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}
}  // namespace

SeedSpec SeedSpec::derive(std::string_view label, std::uint64_t index) const {
    SeedSpec child = *this;
    child.path_.emplace_back(std::string(label), index);
    return child;
}

std::uint64_t SeedSpec::key() const noexcept {
    std::uint64_t h = splitmix64(master_);
    for (const auto& [label, index] : path_) {
        h = splitmix64(h ^ hash_label(label));
        h = splitmix64(h ^ index);
    }
    return h;
}

std::mt19937_64 SeedSpec::engine() const {
    const std::uint64_t k = key();
    std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    return std::mt19937_64(seq);
}

std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t dim, double stddev) {
    std::normal_distribution<double> dist(0.0, stddev);
    std::vector<double> out(dim);
    for (double& v : out) v = dist(rng);
    return out;
}

}  // namespace gasfl
