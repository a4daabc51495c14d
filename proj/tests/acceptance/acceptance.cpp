// Acceptance criteria A1-A10. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gasfl/aggregators.hpp"
#include "gasfl/attacks.hpp"
#include "gasfl/cli/commands.hpp"
#include "gasfl/fedsim/metrics.hpp"
#include "gasfl/fedsim/model.hpp"
#include "gasfl/fedsim/simulation.hpp"
#include "gasfl/fedsim/synthetic_gradients.hpp"
#include "gasfl/gas.hpp"
#include "gasfl/oracles/suites.hpp"
#include "gasfl/resilience.hpp"

namespace {

using namespace gasfl;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome a1_oracles() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const auto& suite : oracles::suite_names()) {
        const auto r = oracles::run_suite(suite, 1, 1000);
        ok = ok && r.passed;
        detail += fmt("%s=%.1e ", suite.c_str(), r.max_discrepancy);
    }
    const double t = seconds_since(t0);
    return {ok && t <= 30.0, detail + fmt("time=%.2fs (limit 30s, tol 1e-12)", t)};
}

Outcome a2_gradient_check() {
    const auto t0 = Clock::now();
    fedsim::DatasetParams p{.classes = 10, .features = 64, .per_class = 2, .test_per_class = 1};
    const auto data = fedsim::generate_synthetic(p, SeedSpec(2)).first;
    const fedsim::ModelArch arch{10, 64, 0};
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    auto rng = SeedSpec(3).engine();
    std::normal_distribution<double> normal(0.0, 0.3);
    const std::size_t d = arch.param_count();
    std::vector<double> w(d), grad(d);
    double worst = 0.0;
    for (int point = 0; point < 100; ++point) {
        for (double& v : w) v = normal(rng);
        fedsim::loss_and_gradient(arch, w, data, data.y, rows, grad);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double h = 1e-5 * std::max(1.0, std::abs(w[k]));
            const double keep = w[k];
            w[k] = keep + h;
            const double up = fedsim::loss(arch, w, data, data.y, rows);
            w[k] = keep - h;
            const double down = fedsim::loss(arch, w, data, data.y, rows);
            w[k] = keep;
            const double fd = (up - down) / (2.0 * h);
            num += (fd - grad[k]) * (fd - grad[k]);
            den += std::max(fd * fd, grad[k] * grad[k]);
        }
        worst = std::max(worst, den == 0.0 ? 0.0 : std::sqrt(num / den));
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-5 && t <= 10.0, fmt("d=%zu points=100 max_rel_err=%.2e time=%.2fs", d, worst, t)};
}

Outcome a3_gas_reductions() {
    auto rng = SeedSpec(4).engine();
    const std::vector<AggregatorSpec> bases{rules::Median{}, rules::TrimmedMean{}, rules::MultiKrum{},
                                            rules::GeometricMedian{}, rules::Mean{}};
    double worst_mean = 0.0, worst_p1 = 0.0;
    for (int inst = 0; inst < 500; ++inst) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 20)(rng);
        const std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
        std::normal_distribution<double> normal(0.0, 2.0);
        GradientList g(n, GradientVector(dim));
        for (auto& v : g)
            for (double& x : v) x = normal(rng);
        const auto& base = bases[static_cast<std::size_t>(inst) % bases.size()];

        GasConfig known0{.groups = std::uniform_int_distribution<std::size_t>(1, dim)(rng), .base = base,
                         .selection = KnownF{0}, .seed = SeedSpec(static_cast<std::uint64_t>(inst))};
        const auto all = gas_aggregate(known0, g, 0);
        const auto m = mean(g);
        for (std::size_t j = 0; j < dim; ++j) worst_mean = std::max(worst_mean, std::abs(all.aggregate[j] - m[j]));

        const std::size_t f = (n - 1) / 4;
        GasConfig single{.groups = 1, .base = base, .selection = KnownF{f}, .seed = SeedSpec(7)};
        const auto res = gas_aggregate(single, g, 0);
        const auto whole = aggregate(base, g, f);
        for (std::size_t i = 0; i < n; ++i)
            worst_p1 = std::max(worst_p1, std::abs(res.scores.totals[i] - distance(g[i], whole)));
    }
    return {worst_mean <= 1e-12 && worst_p1 <= 1e-12,
            fmt("instances=500 knownf0_vs_mean=%.1e p1_vs_whole=%.1e (tol 1e-12)", worst_mean, worst_p1)};
}

Outcome a4_resilience() {
    bool ok = true;
    std::string detail;
    const ResilienceOptions opts{.adversary_scale = 1e6};
    const std::vector<std::pair<AggregatorSpec, std::size_t>> robust{
        {rules::Median{}, 10}, {rules::TrimmedMean{}, 10}, {rules::MultiKrum{}, 10}, {rules::Bulyan{}, 11}};
    for (const auto& [spec, n] : robust) {
        const auto rep = estimate_resilience(spec, n, 2, 10, 1000, SeedSpec(5), opts);
        ok = ok && std::isfinite(rep.lambda_hat);
        detail += fmt("%s(n=%zu)=%.3g ", std::string(rule_name(spec)).c_str(), n, rep.lambda_hat);
    }
    const auto neg = estimate_resilience(rules::Mean{}, 10, 2, 10, 1000, SeedSpec(5), opts);
    ok = ok && neg.lambda_hat > 1e3;
    return {ok, detail + fmt("mean=%.3g (must exceed 1e3); bulyan needs n>=4f+3 so runs at n=11", neg.lambda_hat)};
}

struct ExclusionStats {
    double byz_inclusion = 0.0;
    double honest_ratio = 0.0;
    double gas_deviation = 0.0;
    double median_deviation = 0.0;
    double seconds = 0.0;
};

ExclusionStats synthetic_exclusion() {
    const auto t0 = Clock::now();
    constexpr std::size_t n = 50, f = 10, dim = 1024, rounds = 100;
    const fedsim::SyntheticGradientSource source({.kappa = 1.0, .sigma = 0.5}, n - f, dim, SeedSpec(6));
    const GasConfig cfg{.groups = 16, .base = rules::Median{}, .selection = KnownF{f}, .seed = SeedSpec(7)};
    std::vector<char> is_byz(n, 0);
    std::fill(is_byz.begin(), is_byz.begin() + f, 1);  // Byzantine clients hold the lowest indices
    ExclusionStats s;
    for (std::size_t t = 0; t < rounds; ++t) {
        const auto honest = source.sample(t);
        const auto crafted = craft(attacks::Lie{.z = 1.5}, {honest, f, {}}, SeedSpec(8).derive("round", t));
        GradientList uploads(crafted.begin(), crafted.end());
        uploads.insert(uploads.end(), honest.begin(), honest.end());
        const auto res = gas_aggregate(cfg, uploads, t);
        const auto inc = fedsim::inclusion_metrics(res.selection.selected, is_byz);
        s.byz_inclusion += static_cast<double>(inc.byz_count);
        s.honest_ratio += inc.honest_ratio;
        s.gas_deviation += fedsim::deviation_metric(res.aggregate, honest);
        s.median_deviation += fedsim::deviation_metric(aggregate(rules::Median{}, uploads, f), honest);
    }
    s.byz_inclusion /= rounds;
    s.honest_ratio /= rounds;
    s.gas_deviation /= rounds;
    s.median_deviation /= rounds;
    s.seconds = seconds_since(t0);
    return s;
}

Outcome a5_exclusion(const ExclusionStats& s) {
    return {s.byz_inclusion <= 0.5 && s.honest_ratio >= 0.95 && s.seconds <= 60.0,
            fmt("mean_byz_inclusion=%.3f (<=0.5) honest_ratio=%.4f (>=0.95) time=%.2fs", s.byz_inclusion,
                s.honest_ratio, s.seconds)};
}

Outcome a6_deviation(const ExclusionStats& s) {
    const double reduction = 1.0 - s.gas_deviation / s.median_deviation;
    return {reduction >= 0.20 && s.seconds <= 60.0,
            fmt("gas=%.4f median=%.4f reduction=%.1f%% (>=20%%)", s.gas_deviation, s.median_deviation, 100 * reduction)};
}

fedsim::ExperimentConfig desk(fedsim::DefenseSpec defense, AttackSpec attack = attacks::Lie{.z = 1.5}) {
    fedsim::ExperimentConfig cfg;
    cfg.defense = std::move(defense);
    cfg.attack = attack;
    return cfg;
}

double best_mean(const fedsim::ExperimentConfig& cfg) { return fedsim::run_experiment(cfg).summary.mean; }

Outcome a7_desk(double& gas_median_known) {
    const auto t0 = Clock::now();
    const double clean = best_mean(desk(fedsim::PlainDefense{rules::Mean{}}, attacks::NoAttack{}));
    const double median = best_mean(desk(fedsim::PlainDefense{rules::Median{}}));
    gas_median_known = best_mean(desk(fedsim::GasDefense{.groups = 10, .base = rules::Median{}}));
    const double krum = best_mean(desk(fedsim::PlainDefense{rules::MultiKrum{}}));
    const double gas_krum = best_mean(desk(fedsim::GasDefense{.groups = 10, .base = rules::MultiKrum{}}));
    const double t = seconds_since(t0);
    const bool i = clean >= 0.90;
    const bool ii = gas_median_known - median >= 0.05;
    const bool iii = gas_krum - krum >= 0.05;
    return {i && ii && iii && t <= 300.0,
            fmt("(i) clean=%.4f %s (ii) gas_median=%.4f median=%.4f %s (iii) gas_mkrum=%.4f mkrum=%.4f %s time=%.1fs",
                clean, i ? "ok" : "miss", gas_median_known, median, ii ? "ok" : "miss", gas_krum, krum,
                iii ? "ok" : "miss", t)};
}

Outcome a8_ratio_mode(double known) {
    bool ok = true;
    std::string detail = fmt("known_f=%.4f", known);
    for (double delta : {0.1, 0.3}) {
        const double acc =
            best_mean(desk(fedsim::GasDefense{.groups = 10, .base = rules::Median{}, .known_f = false, .delta = delta}));
        ok = ok && std::abs(acc - known) <= 0.03;
        detail += fmt(" delta=%.1f:%.4f", delta, acc);
    }
    return {ok, detail + " (within 0.03)"};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome a9_determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "gasfl-acceptance-a9";
    fs::remove_all(root);
    const fs::path config = fs::path(GASFL_SOURCE_DIR) / "configs" / "quick.yaml";
    std::ostringstream sink;
    int rc = 0;
    rc |= cli::cmd_run({.config = config, .out = root / "a"}, sink, sink);
    rc |= cli::cmd_run({.config = config, .out = root / "b"}, sink, sink);
    rc |= cli::cmd_run({.config = config, .out = root / "c", .jobs = 4}, sink, sink);
    bool same = rc == 0;
    for (const char* file : {"rounds.csv", "summary.txt", "manifest.yaml"}) {
        const auto a = slurp(root / "a" / file);
        same = same && !a.empty() && a == slurp(root / "b" / file) && a == slurp(root / "c" / file);
    }
    fs::remove_all(root);
    return {same, fmt("exit=%d repeat and --jobs 4 outputs %s", rc, same ? "byte-identical" : "differ")};
}

double median_time(std::size_t dim) {
    constexpr std::size_t n = 50;
    auto rng = SeedSpec(9).derive("dim", dim).engine();
    std::normal_distribution<double> normal;
    GradientList g(n, GradientVector(dim));
    for (auto& v : g)
        for (double& x : v) x = normal(rng);
    const GasConfig cfg{.groups = 100, .base = rules::Median{}, .selection = KnownF{10}, .seed = SeedSpec(10)};
    std::vector<double> times;
    for (int trial = 0; trial < 5; ++trial) {
        const auto t0 = Clock::now();
        const auto res = gas_aggregate(cfg, g, static_cast<std::uint64_t>(trial));
        times.push_back(seconds_since(t0));
        if (!std::isfinite(res.aggregate[0])) return -1.0;
    }
    std::sort(times.begin(), times.end());
    return times[2];
}

Outcome a10_complexity() {
    const double small = median_time(10'000);
    const double large = median_time(100'000);
    const double ratio = large / small;
    return {small > 0 && ratio <= 20.0, fmt("t(1e4)=%.4fs t(1e5)=%.4fs ratio=%.2f (<=20)", small, large, ratio)};
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](const char* id, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    };
    report("A1", a1_oracles);
    report("A2", a2_gradient_check);
    report("A3", a3_gas_reductions);
    report("A4", a4_resilience);
    ExclusionStats exclusion;
    report("A5", [&] {
        exclusion = synthetic_exclusion();
        return a5_exclusion(exclusion);
    });
    report("A6", [&] { return a6_deviation(exclusion); });
    double known = 0.0;
    report("A7", [&] { return a7_desk(known); });
    report("A8", [&] { return a8_ratio_mode(known); });
    report("A9", a9_determinism);
    report("A10", a10_complexity);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
