#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gasfl/aggregators.hpp"
#include "gasfl/error.hpp"
#include "gasfl/linalg.hpp"
#include "gasfl/oracles/references.hpp"
#include "helpers.hpp"

namespace gasfl {
namespace {

using testing::gaussian_points;
using testing::max_abs_diff;

TEST(Aggregate, Dispatch) {
    EXPECT_EQ(aggregate(rules::Mean{}, GradientList{{1}, {3}}, 0), (GradientVector{2}));
    EXPECT_EQ(aggregate(rules::Median{}, GradientList{{1}, {2}, {9}}, 1), (GradientVector{2}));
}

TEST(Aggregate, PreconditionMessagesNameTheRule) {
    GradientList six(6, GradientVector{0.0});
    try {
        aggregate(rules::Bulyan{}, six, 1);
        FAIL() << "expected a precondition error";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("Bulyan requires n >= 4f+3"), std::string::npos);
    }
    EXPECT_THROW(aggregate(rules::Median{}, GradientList{{1}, {2}}, 1), PreconditionError);
    EXPECT_THROW(aggregate(rules::MultiKrum{}, GradientList{{1}, {2}, {3}}, 1), PreconditionError);
    EXPECT_THROW(aggregate(rules::Mean{}, GradientList{}, 0), PreconditionError);
}

TEST(Aggregate, DefaultsFromHyperparameterTable) {
    EXPECT_EQ(rules::GeometricMedian{}.iters, 3);
    EXPECT_DOUBLE_EQ(rules::GeometricMedian{}.smoothing, 1e-8);
    EXPECT_DOUBLE_EQ(rules::Dnc{}.c, 4.0);
    EXPECT_EQ(rules::Dnc{}.niters, 1);
    EXPECT_EQ(rules::Dnc{}.b, 10000u);
}

TEST(Aggregate, NamesRoundTrip) {
    for (const char* name : {"mean", "median", "trimmed_mean", "multi_krum", "bulyan", "geometric_median", "dnc"})
        EXPECT_EQ(rule_name(aggregator_from_name(name)), name);
    EXPECT_THROW(aggregator_from_name("krum++"), ConfigError);
}

TEST(Median, Examples) {
    EXPECT_EQ(coordinate_median(GradientList{{1}, {2}, {9}}), (GradientVector{2}));
    EXPECT_EQ(coordinate_median(GradientList{{1, 0}, {2, 1}, {3, 5}, {4, 6}}), (GradientVector{2.5, 3.0}));
    EXPECT_THROW(coordinate_median(GradientList{}), PreconditionError);
}

TEST(Median, MatchesSortOracle) {
    auto rng = SeedSpec(1).engine();
    const auto g = gaussian_points(rng, 7, 3);
    EXPECT_EQ(coordinate_median(g), oracles::median_by_sort(g));
}

TEST(TrimmedMean, Examples) {
    EXPECT_EQ(coordinate_trimmed_mean(GradientList{{0}, {1}, {2}, {3}, {100}}, 1), (GradientVector{2}));
    auto rng = SeedSpec(2).engine();
    const auto g = gaussian_points(rng, 6, 3);
    EXPECT_LE(max_abs_diff(coordinate_trimmed_mean(g, 0), mean(g)), 1e-15);
    EXPECT_THROW(coordinate_trimmed_mean(g, 3), PreconditionError);
}

TEST(TrimmedMean, MatchesSortOracle) {
    auto rng = SeedSpec(3).engine();
    const auto g = gaussian_points(rng, 9, 4);
    EXPECT_EQ(coordinate_trimmed_mean(g, 2), oracles::trimmed_mean_by_sort(g, 2));
}

TEST(MultiKrum, OutlierIsDropped) {
    const auto out = multi_krum(GradientList{{1, 1}, {1, 1}, {1, 1}, {100, 100}}, 1);
    EXPECT_EQ(out.value, (GradientVector{1, 1}));
    EXPECT_EQ(out.selected, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(MultiKrum, IdenticalInputs) {
    const GradientList g(5, GradientVector{0.25, -4});
    EXPECT_EQ(multi_krum(g, 1).value, g[0]);
}

TEST(MultiKrum, ScoresMatchPairEnumeration) {
    auto rng = SeedSpec(4).engine();
    const auto g = gaussian_points(rng, 6, 3);
    const auto got = krum_scores(g, 1);
    const auto ref = oracles::krum_scores_brute(g, 1);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(got[i], ref[i], 1e-12);
    EXPECT_THROW(krum_scores(g, 4), PreconditionError);
}

TEST(MultiKrum, TiesGoToLowerIndex) {
    const GradientList g(5, GradientVector{1.0});
    EXPECT_EQ(multi_krum(g, 1).selected, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Bulyan, Examples) {
    const GradientList same(7, GradientVector{3, -1});
    EXPECT_EQ(bulyan(same, 1).value, same[0]);
    GradientList g(6, GradientVector{0.0});
    g.push_back(GradientVector{100.0});
    EXPECT_EQ(bulyan(g, 1).value, (GradientVector{0.0}));
    EXPECT_THROW(bulyan(GradientList(6, GradientVector{0.0}), 1), PreconditionError);
}

TEST(Bulyan, MatchesStraightLineReference) {
    auto rng = SeedSpec(5).engine();
    const auto g = gaussian_points(rng, 11, 2);
    const auto got = bulyan(g, 2);
    const auto ref = oracles::bulyan_reference(g, 2);
    EXPECT_EQ(got.selected, ref.picked);
    EXPECT_LE(max_abs_diff(got.value, ref.value), 1e-12);
}

TEST(Bulyan, OutputWithinSelectedRange) {
    auto rng = SeedSpec(6).engine();
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = gaussian_points(rng, 11, 3);
        const auto out = bulyan(g, 2);
        for (std::size_t j = 0; j < 3; ++j) {
            double lo = 1e300, hi = -1e300;
            for (std::size_t i : out.selected) {
                lo = std::min(lo, g[i][j]);
                hi = std::max(hi, g[i][j]);
            }
            EXPECT_GE(out.value[j], lo);
            EXPECT_LE(out.value[j], hi);
        }
    }
}

TEST(GeometricMedian, Examples) {
    const GradientList same(4, GradientVector{2, 7});
    EXPECT_LE(max_abs_diff(geometric_median(same, 3, 1e-8), same[0]), 1e-12);

    const GradientList square{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    EXPECT_LE(max_abs_diff(geometric_median(square, 3, 1e-8), GradientVector{1, 1}), 1e-9);

    const GradientList line{{0}, {1}, {10}};
    const auto z = geometric_median(line, 200, 1e-8);
    EXPECT_NEAR(z[0], 1.0, 1e-3);
    EXPECT_LE(oracles::sum_of_distances(line, z), oracles::sum_of_distances(line, mean(line)));
}

TEST(GeometricMedian, ObjectiveDoesNotIncrease) {
    auto rng = SeedSpec(7).engine();
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = gaussian_points(rng, 9, 4);
        const auto path = oracles::weiszfeld_iterates(g, 10, 1e-8);
        for (std::size_t t = 1; t < path.size(); ++t)
            EXPECT_LE(oracles::sum_of_distances(g, path[t]), oracles::sum_of_distances(g, path[t - 1]) + 1e-12);
        EXPECT_LE(max_abs_diff(geometric_median(g, 10, 1e-8), path.back()), 1e-12);
    }
}

TEST(Dnc, NoByzantineIsMean) {
    auto rng = SeedSpec(8).engine();
    const auto g = gaussian_points(rng, 8, 5);
    const auto out = dnc(g, 0, rules::Dnc{}, SeedSpec(1));
    EXPECT_LE(max_abs_diff(out.value, mean(g)), 1e-15);
    EXPECT_EQ(out.selected.size(), 8u);
}

TEST(Dnc, RemovesRankOneOutliers) {
    GradientList g(8, GradientVector(6, 0.0));
    g.insert(g.begin() + 3, GradientVector(6, 10.0));
    g.push_back(GradientVector(6, 10.0));
    const auto out = dnc(g, 2, rules::Dnc{}, SeedSpec(2));
    EXPECT_EQ(out.value, GradientVector(6, 0.0));
    EXPECT_EQ(std::count(out.selected.begin(), out.selected.end(), 3u), 0);
    EXPECT_EQ(std::count(out.selected.begin(), out.selected.end(), 9u), 0);

    // The outliers carry the whole spectral mass of the centred Gram matrix.
    const auto u = oracles::top_eigenvector_dense(oracles::centred_gram(g));
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i == 3 || i == 9)
            EXPECT_GT(std::abs(u[i]), 0.5);
        else
            EXPECT_LT(std::abs(u[i]), 0.5);
    }
}

TEST(Dnc, PowerIterationMatchesDenseEigensolver) {
    auto rng = SeedSpec(9).engine();
    for (int trial = 0; trial < 50; ++trial) {
        auto g = gaussian_points(rng, 10, 4);
        g[0] *= 8.0;  // planted spike for a clear spectral gap
        const auto gram = oracles::centred_gram(g);
        const auto ref = oracles::top_eigenvector_dense(gram);
        const auto u = power_iteration(gram, 50, SeedSpec(trial));
        double dot_uv = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) dot_uv += u[i] * ref[i];
        const double sign = dot_uv < 0 ? -1.0 : 1.0;
        double err = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(sign * u[i] - ref[i]));
        EXPECT_LE(err, 1e-6);
    }
}

TEST(Dnc, RemovedEveryoneAndPreconditions) {
    const GradientList same(4, GradientVector{1.0});
    EXPECT_THROW(dnc(same, 1, rules::Dnc{}, SeedSpec(0)), PreconditionError);
    // One coordinate per pass: each pass singles out the client owning it, so the
    // union of removals eventually covers everyone.
    GradientList axes(4, GradientVector(4));
    for (std::size_t i = 0; i < 4; ++i) axes[i][i] = 10.0;
    EXPECT_THROW(dnc(axes, 1, rules::Dnc{.c = 1.0, .niters = 40, .b = 1}, SeedSpec(0)), PreconditionError);
}

TEST(Dnc, SubsamplingKeyedBySeedNotClientOrder) {
    auto rng = SeedSpec(10).engine();
    auto g = gaussian_points(rng, 10, 50);
    g[4] *= 30.0;
    const rules::Dnc params{.c = 1.0, .niters = 2, .b = 10};
    const auto base = dnc(g, 1, params, SeedSpec(3));
    std::vector<std::size_t> perm{9, 8, 7, 6, 5, 4, 3, 2, 1, 0};
    GradientList permuted;
    for (std::size_t i : perm) permuted.push_back(g[i]);
    const auto again = dnc(permuted, 1, params, SeedSpec(3));
    EXPECT_LE(max_abs_diff(base.value, again.value), 1e-12);
}

TEST(Bucketing, SizeOneIsPlainRule) {
    auto rng = SeedSpec(11).engine();
    const auto g = gaussian_points(rng, 9, 3);
    const auto wrapped = bucketing_wrap(rules::Median{}, g, 2, 1, SeedSpec(1));
    EXPECT_EQ(wrapped.value, aggregate(rules::Median{}, g, 2));
}

TEST(Bucketing, OneBucketIsMean) {
    auto rng = SeedSpec(12).engine();
    const auto g = gaussian_points(rng, 6, 3);
    const auto wrapped = bucketing_wrap(rules::Median{}, g, 2, 6, SeedSpec(1));
    EXPECT_LE(max_abs_diff(wrapped.value, mean(g)), 1e-12);
}

TEST(Bucketing, MatchesPermuteChunkAverage) {
    auto rng = SeedSpec(13).engine();
    const auto g = gaussian_points(rng, 11, 3);
    const SeedSpec seed(21);
    const auto buckets = oracles::bucket_means_reference(g, 2, seed);
    ASSERT_EQ(buckets.size(), 6u);
    const auto expected = oracles::median_by_sort(buckets);
    EXPECT_LE(max_abs_diff(bucketing_wrap(rules::Median{}, g, 2, 2, seed).value, expected), 1e-12);
}

TEST(Bucketing, TooFewBuckets) {
    const GradientList g(4, GradientVector{1.0});
    EXPECT_THROW(bucketing_wrap(rules::Median{}, g, 1, 2, SeedSpec(0)), PreconditionError);
}

// ----- equivariance and invariance properties --------------------------------

const std::vector<AggregatorSpec> kEquivariant{rules::Mean{}, rules::Median{}, rules::TrimmedMean{},
                                               rules::GeometricMedian{}};

TEST(Properties, TranslationEquivariance) {
    auto rng = SeedSpec(14).engine();
    for (const auto& spec : kEquivariant) {
        for (int trial = 0; trial < 100; ++trial) {
            auto g = gaussian_points(rng, 9, 4);
            const auto base = aggregate(spec, g, 2);
            const auto c = gaussian_points(rng, 1, 4, 5.0).front();
            for (auto& v : g) v += c;
            EXPECT_LE(max_abs_diff(aggregate(spec, g, 2), base + c), 1e-9) << rule_name(spec);
        }
    }
}

TEST(Properties, PositiveScaleEquivariance) {
    auto rng = SeedSpec(15).engine();
    for (const auto& spec : kEquivariant) {
        for (int trial = 0; trial < 100; ++trial) {
            auto g = gaussian_points(rng, 9, 4);
            const auto base = aggregate(spec, g, 2);
            const double a = std::uniform_real_distribution<double>(0.01, 100.0)(rng);
            for (auto& v : g) v *= a;
            const auto scaled = aggregate(spec, g, 2);
            for (std::size_t j = 0; j < 4; ++j)
                EXPECT_NEAR(scaled[j], a * base[j], 1e-9 * std::max(1.0, std::abs(a * base[j]))) << rule_name(spec);
        }
    }
}

TEST(Properties, MedianAndTrimmedMeanStayInRange) {
    auto rng = SeedSpec(16).engine();
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = gaussian_points(rng, 8, 3);
        for (const auto& out : {coordinate_median(g), coordinate_trimmed_mean(g, 2)}) {
            for (std::size_t j = 0; j < 3; ++j) {
                double lo = 1e300, hi = -1e300;
                for (const auto& v : g) {
                    lo = std::min(lo, v[j]);
                    hi = std::max(hi, v[j]);
                }
                EXPECT_GE(out[j], lo);
                EXPECT_LE(out[j], hi);
            }
        }
    }
}

TEST(Properties, PermutationInvariance) {
    const std::vector<AggregatorSpec> all{rules::Mean{},      rules::Median{}, rules::TrimmedMean{},
                                          rules::MultiKrum{}, rules::Bulyan{}, rules::GeometricMedian{}};
    auto rng = SeedSpec(17).engine();
    for (const auto& spec : all) {
        for (int trial = 0; trial < 50; ++trial) {
            // f = 3 keeps Bulyan's last Krum rounds above one neighbour, where mutual
            // nearest pairs would tie and fall back to index order.
            const auto g = gaussian_points(rng, 15, 4);
            const auto base = aggregate(spec, g, 3, SeedSpec(5));
            auto shuffled = g;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            EXPECT_LE(max_abs_diff(aggregate(spec, shuffled, 3, SeedSpec(5)), base), 1e-9) << rule_name(spec);
        }
    }
}

TEST(Properties, DncPermutationInvarianceWithSpectralGap) {
    // Power iteration starts from a seeded vector in client space, so invariance is
    // exact only once it has converged; a planted direction makes that quick.
    auto rng = SeedSpec(18).engine();
    for (int trial = 0; trial < 50; ++trial) {
        auto g = gaussian_points(rng, 11, 6);
        for (std::size_t i = 0; i < 11; ++i) g[i][0] += (i % 2 ? 1.0 : -1.0) * 30.0 * static_cast<double>(i + 1);
        const auto base = aggregate(rules::Dnc{}, g, 2, SeedSpec(5));
        auto shuffled = g;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_LE(max_abs_diff(aggregate(rules::Dnc{}, shuffled, 2, SeedSpec(5)), base), 1e-9);
    }
}

}  // namespace
}  // namespace gasfl
