#include "gasfl/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gasfl/error.hpp"
#include "gasfl/linalg.hpp"

namespace gasfl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string nf(std::size_t n, std::size_t f) {
    return " (n=" + std::to_string(n) + ", f=" + std::to_string(f) + ")";
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

// Median of an unsorted buffer; reorders it. Even sizes average the two middle values.
double median_inplace(std::vector<double>& column) {
    const std::size_t n = column.size();
    const std::size_t mid = n / 2;
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid), column.end());
    const double upper = column[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
}

std::vector<double> pairwise_squared_distances(std::span<const GradientVector> g) {
    const std::size_t n = g.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = squared_distance(g[i], g[j]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return d;
}

// Sum of the k smallest entries of `row` restricted to `pool \ {self}`, summed ascending.
double nearest_sum(const std::vector<double>& dist, std::size_t n, std::size_t self,
                   const std::vector<std::size_t>& pool, std::size_t k, std::vector<double>& scratch) {
    scratch.clear();
    for (std::size_t j : pool)
        if (j != self) scratch.push_back(dist[self * n + j]);
    k = std::min(k, scratch.size());
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k), scratch.end());
    double acc = 0.0;
    for (std::size_t t = 0; t < k; ++t) acc += scratch[t];
    return acc;
}

// Indices sorted by (score ascending, index ascending).
std::vector<std::size_t> rank_ascending(const std::vector<double>& scores) {
    auto order = all_indices(scores.size());
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    return order;
}

Aggregate with_all(GradientVector value, std::size_t n) { return Aggregate{std::move(value), all_indices(n)}; }

}  // namespace

std::string_view rule_name(const AggregatorSpec& spec) noexcept {
    return std::visit(overloaded{
                          [](const rules::Mean&) -> std::string_view { return "mean"; },
                          [](const rules::Median&) -> std::string_view { return "median"; },
                          [](const rules::TrimmedMean&) -> std::string_view { return "trimmed_mean"; },
                          [](const rules::MultiKrum&) -> std::string_view { return "multi_krum"; },
                          [](const rules::Bulyan&) -> std::string_view { return "bulyan"; },
                          [](const rules::GeometricMedian&) -> std::string_view { return "geometric_median"; },
                          [](const rules::Dnc&) -> std::string_view { return "dnc"; },
                      },
                      spec);
}

AggregatorSpec aggregator_from_name(std::string_view name) {
    if (name == "mean") return rules::Mean{};
    if (name == "median") return rules::Median{};
    if (name == "trimmed_mean") return rules::TrimmedMean{};
    if (name == "multi_krum") return rules::MultiKrum{};
    if (name == "bulyan") return rules::Bulyan{};
    if (name == "geometric_median") return rules::GeometricMedian{};
    if (name == "dnc") return rules::Dnc{};
    throw ConfigError("rule", "unknown aggregation rule '" + std::string(name) + "'");
}

void check_preconditions(const AggregatorSpec& spec, std::size_t n, std::size_t f) {
    const std::string name(rule_name(spec));
    if (n == 0) throw PreconditionError(name + " requires at least one gradient");
    if (2 * f >= n) throw PreconditionError(name + " requires f < n/2" + nf(n, f));
    std::visit(overloaded{
                   [&](const rules::MultiKrum&) {
                       if (n < f + 3) throw PreconditionError("MultiKrum requires n >= f+3" + nf(n, f));
                   },
                   [&](const rules::Bulyan&) {
                       if (n < 4 * f + 3) throw PreconditionError("Bulyan requires n >= 4f+3" + nf(n, f));
                   },
                   [&](const rules::GeometricMedian& gm) {
                       if (gm.iters < 1) throw PreconditionError("GeometricMedian requires iters >= 1");
                       if (!(gm.smoothing > 0.0)) throw PreconditionError("GeometricMedian requires smoothing > 0");
                   },
                   [&](const rules::Dnc& p) {
                       if (!(p.c > 0.0)) throw PreconditionError("DnC requires c > 0");
                       if (p.niters < 1) throw PreconditionError("DnC requires niters >= 1");
                       if (p.b < 1) throw PreconditionError("DnC requires b >= 1");
                       const auto removed = static_cast<std::size_t>(std::floor(p.c * static_cast<double>(f)));
                       if (removed >= n) throw PreconditionError("DnC requires n > floor(c*f)" + nf(n, f));
                   },
                   [](const auto&) {},
               },
               spec);
}

GradientVector coordinate_median(std::span<const GradientVector> gradients) {
    const std::size_t dim = common_dim(gradients, "coordinate_median");
    const std::size_t n = gradients.size();
    GradientVector out(dim);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = gradients[i][j];
        out[j] = median_inplace(column);
    }
    return out;
}

GradientVector coordinate_trimmed_mean(std::span<const GradientVector> gradients, std::size_t f) {
    const std::size_t dim = common_dim(gradients, "coordinate_trimmed_mean");
    const std::size_t n = gradients.size();
    if (n <= 2 * f) throw PreconditionError("TrimmedMean requires n > 2f" + nf(n, f));
    const std::size_t kept = n - 2 * f;
    GradientVector out(dim);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = gradients[i][j];
        std::sort(column.begin(), column.end());
        double acc = 0.0;
        for (std::size_t t = f; t < f + kept; ++t) acc += column[t];
        out[j] = acc / static_cast<double>(kept);
    }
    return out;
}

std::vector<double> krum_scores(std::span<const GradientVector> gradients, std::size_t f) {
    common_dim(gradients, "krum_scores");
    const std::size_t n = gradients.size();
    if (n < f + 3) throw PreconditionError("MultiKrum requires n >= f+3" + nf(n, f));
    const auto dist = pairwise_squared_distances(gradients);
    const auto pool = all_indices(n);
    std::vector<double> scores(n), scratch;
    for (std::size_t i = 0; i < n; ++i) scores[i] = nearest_sum(dist, n, i, pool, n - f - 2, scratch);
    return scores;
}

Aggregate multi_krum(std::span<const GradientVector> gradients, std::size_t f) {
    const auto scores = krum_scores(gradients, f);
    auto order = rank_ascending(scores);
    order.resize(gradients.size() - f);
    std::sort(order.begin(), order.end());
    return Aggregate{mean_of(gradients, order), order};
}

Aggregate bulyan(std::span<const GradientVector> gradients, std::size_t f) {
    const std::size_t dim = common_dim(gradients, "bulyan");
    const std::size_t n = gradients.size();
    if (n < 4 * f + 3) throw PreconditionError("Bulyan requires n >= 4f+3" + nf(n, f));
    const std::size_t theta = n - 2 * f;
    const std::size_t beta = theta - 2 * f;

    // Stage 1: repeated Krum over a shrinking pool. With r clients left the score
    // uses clamp(r - f - 2, 1, r - 1) neighbours.
    const auto dist = pairwise_squared_distances(gradients);
    std::vector<std::size_t> pool = all_indices(n);
    std::vector<std::size_t> picked;
    picked.reserve(theta);
    std::vector<double> scratch;
    while (picked.size() < theta) {
        const std::size_t r = pool.size();
        std::size_t best_pos = 0;
        if (r > 1) {
            const std::size_t k = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(f) - 2, 1,
                                                             static_cast<std::ptrdiff_t>(r) - 1);
            double best = 0.0;
            for (std::size_t pos = 0; pos < r; ++pos) {
                const double s = nearest_sum(dist, n, pool[pos], pool, k, scratch);
                if (pos == 0 || s < best) {
                    best = s;
                    best_pos = pos;
                }
            }
        }
        picked.push_back(pool[best_pos]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_pos));
    }

    // Stage 2: per coordinate, average the beta values closest to the median of the
    // picked set (ties by lower value).
    GradientVector out(dim);
    std::vector<double> column(theta), scratch_median(theta);
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t t = 0; t < theta; ++t) column[t] = gradients[picked[t]][j];
        scratch_median = column;
        const double med = median_inplace(scratch_median);
        std::sort(column.begin(), column.end(), [med](double a, double b) {
            const double da = std::abs(a - med), db = std::abs(b - med);
            return da < db || (da == db && a < b);
        });
        double acc = 0.0;
        for (std::size_t t = 0; t < beta; ++t) acc += column[t];
        out[j] = acc / static_cast<double>(beta);
    }
    return Aggregate{std::move(out), std::move(picked)};
}

GradientVector geometric_median(std::span<const GradientVector> gradients, int iters, double smoothing) {
    const std::size_t dim = common_dim(gradients, "geometric_median");
    if (iters < 1) throw PreconditionError("GeometricMedian requires iters >= 1");
    if (!(smoothing > 0.0)) throw PreconditionError("GeometricMedian requires smoothing > 0");
    GradientVector z = mean(gradients);
    for (int it = 0; it < iters; ++it) {
        GradientVector next(dim);
        double weight_sum = 0.0;
        for (const auto& g : gradients) {
            const double w = 1.0 / std::max(smoothing, distance(z, g));
            weight_sum += w;
            for (std::size_t j = 0; j < dim; ++j) next[j] += w * g[j];
        }
        for (double& v : next) v /= weight_sum;
        z = std::move(next);
    }
    return z;
}

Aggregate dnc(std::span<const GradientVector> gradients, std::size_t f, const rules::Dnc& params, const SeedSpec& seed) {
    const std::size_t dim = common_dim(gradients, "dnc");
    const std::size_t n = gradients.size();
    check_preconditions(params, n, f);
    const auto removals = static_cast<std::size_t>(std::floor(params.c * static_cast<double>(f)));

    std::vector<char> marked(n, 0);
    for (int it = 0; it < params.niters; ++it) {
        // Coordinate sample keyed by (seed, iteration) only, never by client order.
        std::vector<std::size_t> coords = all_indices(dim);
        if (params.b < dim) {
            auto rng = seed.derive("dnc-coords", static_cast<std::uint64_t>(it)).engine();
            for (std::size_t t = 0; t < params.b; ++t) {
                std::uniform_int_distribution<std::size_t> pick(t, dim - 1);
                std::swap(coords[t], coords[pick(rng)]);
            }
            coords.resize(params.b);
            std::sort(coords.begin(), coords.end());
        }
        const std::size_t b = coords.size();

        std::vector<double> centered(n * b);
        for (std::size_t k = 0; k < b; ++k) {
            double mu = 0.0;
            for (std::size_t i = 0; i < n; ++i) mu += gradients[i][coords[k]];
            mu /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) centered[i * b + k] = gradients[i][coords[k]] - mu;
        }

        SquareMatrix gram(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = r; c < n; ++c) {
                double acc = 0.0;
                for (std::size_t k = 0; k < b; ++k) acc += centered[r * b + k] * centered[c * b + k];
                gram(r, c) = acc;
                gram(c, r) = acc;
            }
        }
        const auto u = power_iteration(gram, 50, seed.derive("dnc-power", static_cast<std::uint64_t>(it)));

        // Top right singular direction v = X^T u / ||X^T u||.
        std::vector<double> v(b, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < b; ++k) v[k] += centered[i * b + k] * u[i];
        double vnorm = 0.0;
        for (double x : v) vnorm += x * x;
        vnorm = std::sqrt(vnorm);

        std::vector<double> scores(n, 0.0);
        if (vnorm > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                double proj = 0.0;
                for (std::size_t k = 0; k < b; ++k) proj += centered[i * b + k] * v[k];
                proj /= vnorm;
                scores[i] = proj * proj;
            }
        }
        auto order = all_indices(n);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return scores[a] > scores[c]; });
        for (std::size_t t = 0; t < removals; ++t) marked[order[t]] = 1;
    }

    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < n; ++i)
        if (!marked[i]) survivors.push_back(i);
    if (survivors.empty()) throw PreconditionError("DnC removed everyone" + nf(n, f));
    return Aggregate{mean_of(gradients, survivors), survivors};
}

Aggregate aggregate_detailed(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                             const SeedSpec& seed) {
    common_dim(gradients, std::string(rule_name(spec)).c_str());
    check_preconditions(spec, gradients.size(), f);
    const std::size_t n = gradients.size();
    return std::visit(overloaded{
                          [&](const rules::Mean&) { return with_all(mean(gradients), n); },
                          [&](const rules::Median&) { return with_all(coordinate_median(gradients), n); },
                          [&](const rules::TrimmedMean&) { return with_all(coordinate_trimmed_mean(gradients, f), n); },
                          [&](const rules::MultiKrum&) { return multi_krum(gradients, f); },
                          [&](const rules::Bulyan&) { return bulyan(gradients, f); },
                          [&](const rules::GeometricMedian& gm) {
                              return with_all(geometric_median(gradients, gm.iters, gm.smoothing), n);
                          },
                          [&](const rules::Dnc& p) { return dnc(gradients, f, p, seed); },
                      },
                      spec);
}

GradientVector aggregate(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                         const SeedSpec& seed) {
    return aggregate_detailed(spec, gradients, f, seed).value;
}

Aggregate bucketing_wrap(const AggregatorSpec& spec, std::span<const GradientVector> gradients, std::size_t f,
                         std::size_t bucket_size, const SeedSpec& seed) {
    common_dim(gradients, "bucketing");
    if (bucket_size < 1) throw PreconditionError("Bucketing requires bucket size s >= 1");
    const std::size_t n = gradients.size();
    auto perm = all_indices(n);
    auto rng = seed.derive("bucketing").engine();
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::size_t buckets = (n + bucket_size - 1) / bucket_size;
    const std::size_t bucket_f = std::min(f, buckets - 1);
    if (buckets <= 2 * bucket_f) {
        throw PreconditionError("Bucketing: too few buckets (" + std::to_string(buckets) + ") for f=" +
                                std::to_string(bucket_f));
    }
    std::vector<std::vector<std::size_t>> members(buckets);
    GradientList means;
    means.reserve(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
        const std::size_t lo = b * bucket_size, hi = std::min(n, lo + bucket_size);
        members[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(lo), perm.begin() + static_cast<std::ptrdiff_t>(hi));
        means.push_back(mean_of(gradients, members[b]));
    }
    auto inner = aggregate_detailed(spec, means, bucket_f, seed.derive("bucketing-inner"));
    std::vector<std::size_t> clients;
    for (std::size_t b : inner.selected) clients.insert(clients.end(), members[b].begin(), members[b].end());
    std::sort(clients.begin(), clients.end());
    return Aggregate{std::move(inner.value), std::move(clients)};
}

}  // namespace gasfl
