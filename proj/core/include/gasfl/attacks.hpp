#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "gasfl/seed.hpp"
#include "gasfl/vector.hpp"

namespace gasfl {

namespace attacks {
struct NoAttack {};
/// Each Byzantine client sends the negation of its own gradient.
struct BitFlip {};
/// Data poisoning applied during local training (labels y -> C-1-y); gradients pass through.
struct LabelFlip {};
/// Little-is-enough: mu + z * sigma.
struct Lie {
    double z = 1.5;
};
struct MinMax {
    double gamma_init = 10.0;
    double tau = 1e-5;
};
struct MinSum {
    double gamma_init = 10.0;
    double tau = 1e-5;
};
/// Inner-product manipulation: -epsilon * mu.
struct Ipm {
    double epsilon = 0.5;
};
}  // namespace attacks

using AttackSpec = std::variant<attacks::NoAttack, attacks::BitFlip, attacks::LabelFlip, attacks::Lie, attacks::MinMax,
                                attacks::MinSum, attacks::Ipm>;

/// Canonical names: none, bit_flip, label_flip, lie, min_max, min_sum, ipm.
std::string_view attack_name(const AttackSpec& spec) noexcept;
AttackSpec attack_from_name(std::string_view name);

/// What an omniscient attacker sees in one round.
struct AttackContext {
    std::span<const GradientVector> honest_gradients;
    std::size_t byz_count = 0;
    /// The Byzantine clients' own (honestly computed) gradients; BitFlip and the
    /// pass-through attacks read these.
    std::span<const GradientVector> byzantine_gradients;
};

/// Coordinate-wise mean and population standard deviation (divisor n).
struct CoordinateStats {
    GradientVector mean;
    GradientVector stddev;
};
CoordinateStats coordinate_stats(std::span<const GradientVector> honest);

GradientVector lie(std::span<const GradientVector> honest, double z);

/// mu - gamma * sigma with gamma the largest value (to within tau) keeping
/// max_i ||v - g_i|| <= max_{i,j} ||g_i - g_j||.
GradientVector min_max(std::span<const GradientVector> honest, double gamma_init, double tau);

/// As min_max with the constraint sum_i ||v - g_i||^2 <= max_j sum_i ||g_j - g_i||^2.
GradientVector min_sum(std::span<const GradientVector> honest, double gamma_init, double tau);

GradientVector ipm(std::span<const GradientVector> honest, double epsilon);

/// Largest feasible gamma for a monotone constraint: expand (double) or shrink
/// (halve) from gamma_init to bracket the boundary, then bisect to width tau.
/// Returns 0 when no positive gamma down to tau is feasible.
template <class Feasible>
double search_gamma(Feasible&& feasible, double gamma_init, double tau);

/// f Byzantine vectors for the round. Colluding attacks return f identical copies.
std::vector<GradientVector> craft(const AttackSpec& spec, const AttackContext& ctx, const SeedSpec& seed);

template <class Feasible>
double search_gamma(Feasible&& feasible, double gamma_init, double tau) {
    double lo = 0.0, hi = 0.0;
    double gamma = gamma_init;
    if (feasible(gamma)) {
        lo = gamma;
        hi = 2.0 * gamma;
        for (int k = 0; k < 64 && feasible(hi); ++k) {
            lo = hi;
            hi *= 2.0;
        }
        if (feasible(hi)) return hi;
    } else {
        hi = gamma;
        gamma /= 2.0;
        while (gamma > tau && !feasible(gamma)) {
            hi = gamma;
            gamma /= 2.0;
        }
        if (!feasible(gamma)) return 0.0;
        lo = gamma;
    }
    while (hi - lo > tau) {
        const double mid = lo + (hi - lo) / 2.0;
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace gasfl
