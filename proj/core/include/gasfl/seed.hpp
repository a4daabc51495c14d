#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gasfl {

/// Deterministic seed with a labelled derivation path.
///
/// A stream is a pure function of (master seed, path). Deriving never mutates the
/// parent, so independent components (round t, client i, group q) can each
/// derive their own stream without sharing generator state. The path is folded
/// into a 64-bit key with SplitMix64 finalisers; the key seeds a `std::mt19937_64`.
class SeedSpec {
public:
    using Step = std::pair<std::string, std::uint64_t>;

    SeedSpec() = default;
    explicit SeedSpec(std::uint64_t master_seed) : master_(master_seed) {}

    SeedSpec derive(std::string_view label, std::uint64_t index = 0) const;

    std::uint64_t master_seed() const noexcept { return master_; }
    const std::vector<Step>& path() const noexcept { return path_; }

    /// 64-bit key identifying this stream.
    std::uint64_t key() const noexcept;

    std::mt19937_64 engine() const;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;

private:
    std::uint64_t master_ = 0;
    std::vector<Step> path_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Standard-normal draws into a fresh vector.
std::vector<double> normal_vector(std::mt19937_64& rng, std::size_t dim, double stddev = 1.0);

}  // namespace gasfl
