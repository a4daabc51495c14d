#include "gasfl/oracles/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "gasfl/aggregators.hpp"
#include "gasfl/gas.hpp"
#include "gasfl/linalg.hpp"
#include "gasfl/oracles/references.hpp"
#include "gasfl/seed.hpp"

namespace gasfl::oracles {

namespace {

constexpr double kExact = 1e-12;
constexpr double kMismatch = std::numeric_limits<double>::infinity();

struct Instance {
    GradientList g;
    std::size_t f = 0;
    std::mt19937_64 rng;
};

// n in [n_min, 11], d in [1, 5]. A third of the instances use small integers so
// ties and repeated points occur.
Instance draw(std::uint64_t key, std::size_t n_min, const std::function<std::size_t(std::size_t)>& max_f) {
    Instance inst{{}, 0, SeedSpec(key).engine()};
    auto& rng = inst.rng;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(n_min, 11)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    inst.f = std::uniform_int_distribution<std::size_t>(0, max_f(n))(rng);
    const bool integral = std::uniform_int_distribution<int>(0, 2)(rng) == 0;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> small(-2, 2);
    for (std::size_t i = 0; i < n; ++i) {
        GradientVector v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = integral ? small(rng) : normal(rng);
        inst.g.push_back(std::move(v));
    }
    return inst;
}

double vec_gap(const GradientVector& a, const GradientVector& b) {
    if (a.dim() != b.dim()) return kMismatch;
    double worst = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j)
        worst = std::max(worst, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(b[j])));
    return worst;
}

double list_gap(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return kMismatch;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
    return worst;
}

template <class T>
double same(const std::vector<T>& a, const std::vector<T>& b) {
    return a == b ? 0.0 : kMismatch;
}

void nudge(GradientVector& v, bool fault) {
    if (fault) v[0] += 1e-6;
}

std::vector<std::size_t> lowest(const std::vector<double>& scores, std::size_t keep) {
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t i = 0; i < scores.size(); ++i) keyed.emplace_back(scores[i], i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < keep; ++t) out.push_back(keyed[t].second);
    std::sort(out.begin(), out.end());
    return out;
}

double check_median(std::uint64_t key, bool fault) {
    auto inst = draw(key, 1, [](std::size_t) { return 0; });
    auto got = coordinate_median(inst.g);
    nudge(got, fault);
    return vec_gap(got, median_by_sort(inst.g));
}

double check_trimmed_mean(std::uint64_t key, bool fault) {
    auto inst = draw(key, 1, [](std::size_t n) { return (n - 1) / 2; });
    auto got = coordinate_trimmed_mean(inst.g, inst.f);
    nudge(got, fault);
    return vec_gap(got, trimmed_mean_by_sort(inst.g, inst.f));
}

double check_krum(std::uint64_t key, bool fault) {
    auto inst = draw(key, 3, [](std::size_t n) { return std::min(n - 3, (n - 1) / 2); });
    auto scores = krum_scores(inst.g, inst.f);
    if (fault) scores[0] += 1e-6;
    const auto ref = krum_scores_brute(inst.g, inst.f);
    const auto mk = multi_krum(inst.g, inst.f);
    const auto ref_sel = lowest(ref, inst.g.size() - inst.f);
    return std::max({list_gap(scores, ref), same(mk.selected, ref_sel)});
}

double check_bulyan(std::uint64_t key, bool fault) {
    auto inst = draw(key, 3, [](std::size_t n) { return (n - 3) / 4; });
    auto got = bulyan(inst.g, inst.f);
    nudge(got.value, fault);
    const auto ref = bulyan_reference(inst.g, inst.f);
    return std::max(same(got.selected, ref.picked), vec_gap(got.value, ref.value));
}

double check_weiszfeld(std::uint64_t key, bool fault) {
    auto inst = draw(key, 1, [](std::size_t) { return 0; });
    const int iters = std::uniform_int_distribution<int>(1, 10)(inst.rng);
    auto got = geometric_median(inst.g, iters, 1e-8);
    nudge(got, fault);
    const auto path = weiszfeld_iterates(inst.g, iters, 1e-8);
    double gap = vec_gap(got, path.back());
    // Steps do not increase the sum of distances, up to the smoothing floor: an
    // iterate sitting on a data point can move by about n * smoothing.
    const double slack = static_cast<double>(inst.g.size()) * 1e-8;
    for (std::size_t t = 1; t < path.size(); ++t) {
        const double before = sum_of_distances(inst.g, path[t - 1]);
        const double after = sum_of_distances(inst.g, path[t]);
        if (after > before + slack + 1e-12 * std::max(1.0, before)) gap = kMismatch;
    }
    return gap;
}

// Honest points plus f identical points pushed far along one direction, so the
// centred Gram matrix has a clear leading eigenvalue.
double check_dnc(std::uint64_t key, bool fault) {
    auto rng = SeedSpec(key).engine();
    const std::size_t n = std::uniform_int_distribution<std::size_t>(5, 11)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    const std::size_t f = std::uniform_int_distribution<std::size_t>(1, (n - 1) / 4)(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    GradientList g;
    GradientVector spike(d);
    for (std::size_t j = 0; j < d; ++j) spike[j] = normal(rng);
    spike *= 20.0 / l2_norm(spike);
    for (std::size_t i = 0; i < n; ++i) {
        GradientVector v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = normal(rng);
        if (i >= n - f) v = spike;
        g.push_back(std::move(v));
    }

    const auto gram = centred_gram(g);
    const auto ref_u = top_eigenvector_dense(gram);
    const SeedSpec seed(key);
    auto u = power_iteration(gram, 50, seed.derive("dnc-power", 0));
    double dot_uv = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot_uv += u[i] * ref_u[i];
    const double sign = dot_uv < 0 ? -1.0 : 1.0;
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(sign * u[i] - ref_u[i]));
    gap = gap <= 1e-6 ? 0.0 : gap;

    // Scores are lambda * u_i^2, so the reference removes the largest |u_i|.
    const rules::Dnc params{};
    const auto removals = static_cast<std::size_t>(std::floor(params.c * static_cast<double>(f)));
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -(ref_u[i] * ref_u[i]);
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t i = 0; i < n; ++i) keyed.emplace_back(neg[i], i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> survivors;
    for (std::size_t t = removals; t < n; ++t) survivors.push_back(keyed[t].second);
    std::sort(survivors.begin(), survivors.end());
    const bool ambiguous = removals < n && removals > 0 &&
                           std::abs(keyed[removals].first - keyed[removals - 1].first) < 1e-9;

    auto got = dnc(g, f, params, seed);
    nudge(got.value, fault);
    if (!ambiguous) {
        GradientVector ref_mean = mean_of(g, survivors);
        gap = std::max({gap, same(got.selected, survivors), vec_gap(got.value, ref_mean)});
    }
    return gap;
}

double check_gas(std::uint64_t key, bool fault) {
    auto inst = draw(key, 2, [](std::size_t n) { return (n - 1) / 2; });
    const std::size_t n = inst.g.size(), d = inst.g.front().dim();

    // KnownF(0) keeps everyone.
    GasConfig plain;
    plain.groups = std::uniform_int_distribution<std::size_t>(1, d)(inst.rng);
    plain.selection = KnownF{0};
    plain.seed = SeedSpec(key);
    auto all = gas_aggregate(plain, inst.g, 0).aggregate;
    nudge(all, fault);
    GradientVector avg(d);
    for (const auto& v : inst.g)
        for (std::size_t j = 0; j < d; ++j) avg[j] += v[j];
    for (std::size_t j = 0; j < d; ++j) avg[j] /= static_cast<double>(n);
    double gap = vec_gap(all, avg);

    // One group: totals are whole-vector distances to the base aggregate.
    GasConfig one = plain;
    one.groups = 1;
    one.selection = KnownF{inst.f};
    const auto res = gas_aggregate(one, inst.g, 0);
    const auto med = median_by_sort(inst.g);
    std::vector<double> ref_totals;
    for (const auto& v : inst.g) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += (v[j] - med[j]) * (v[j] - med[j]);
        ref_totals.push_back(std::sqrt(s));
    }
    gap = std::max({gap, list_gap(res.scores.totals, ref_totals), same(res.selection.selected, lowest(ref_totals, n - inst.f))});

    // One coordinate per group: totals are l1 distances to the coordinate median.
    GasConfig each = one;
    each.groups = d;
    const auto per = gas_aggregate(each, inst.g, 0);
    std::vector<double> l1;
    for (const auto& v : inst.g) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += std::abs(v[j] - med[j]);
        l1.push_back(s);
    }
    return std::max(gap, list_gap(per.scores.totals, l1));
}

using Check = double (*)(std::uint64_t, bool);

Check lookup(std::string_view suite) {
    if (suite == "median") return check_median;
    if (suite == "trimmed_mean") return check_trimmed_mean;
    if (suite == "krum") return check_krum;
    if (suite == "bulyan") return check_bulyan;
    if (suite == "weiszfeld") return check_weiszfeld;
    if (suite == "dnc") return check_dnc;
    if (suite == "gas") return check_gas;
    throw std::invalid_argument("unknown oracle suite '" + std::string(suite) + "'");
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"median", "trimmed_mean", "krum", "bulyan", "weiszfeld", "dnc", "gas"};
    return names;
}

SuiteReport run_suite(std::string_view suite, std::uint64_t seed, std::size_t instances, bool inject_fault) {
    const Check check = lookup(suite);
    SuiteReport report;
    report.suite = std::string(suite);
    report.tolerance = kExact;
    const SeedSpec root(seed);
    for (std::size_t k = 0; k < instances; ++k) {
        const std::uint64_t key = root.derive(report.suite, k).key();
        double gap = 0.0;
        try {
            gap = check(key, inject_fault);
        } catch (const std::exception& e) {
            gap = kMismatch;
            if (report.passed) report.failure = e.what();
        }
        ++report.instances;
        report.max_discrepancy = std::max(report.max_discrepancy, gap);
        if (gap > report.tolerance && report.passed) {
            report.passed = false;
            report.failing_seed = key;
            if (report.failure.empty()) report.failure = "discrepancy " + std::to_string(gap);
        }
    }
    return report;
}

}  // namespace gasfl::oracles
