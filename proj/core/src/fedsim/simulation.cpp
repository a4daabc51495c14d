#include "gasfl/fedsim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>

#include "gasfl/error.hpp"
#include "gasfl/fedsim/metrics.hpp"
#include "gasfl/parallel.hpp"

namespace gasfl::fedsim {

namespace {

bool needs_own_gradients(const AttackSpec& attack) {
    return std::holds_alternative<attacks::NoAttack>(attack) || std::holds_alternative<attacks::BitFlip>(attack) ||
           std::holds_alternative<attacks::LabelFlip>(attack);
}

void validate_rule(const AggregatorSpec& rule, const std::string& field) {
    if (const auto* gm = std::get_if<rules::GeometricMedian>(&rule)) {
        if (gm->iters < 1) throw ConfigError(field + ".iters", "must be >= 1");
        if (!(gm->smoothing > 0.0)) throw ConfigError(field + ".smoothing", "must be > 0");
    }
    if (const auto* dnc = std::get_if<rules::Dnc>(&rule)) {
        if (!(dnc->c > 0.0)) throw ConfigError(field + ".c", "must be > 0");
        if (dnc->niters < 1) throw ConfigError(field + ".niters", "must be >= 1");
        if (dnc->b < 1) throw ConfigError(field + ".b", "must be >= 1");
    }
}

}  // namespace

std::string defense_label(const DefenseSpec& defense) {
    if (const auto* plain = std::get_if<PlainDefense>(&defense)) return std::string(rule_name(plain->rule));
    if (const auto* gas = std::get_if<GasDefense>(&defense)) {
        std::string label = "gas(" + std::string(rule_name(gas->base)) + ",p=" + std::to_string(gas->groups);
        if (!gas->known_f) label += ",delta=" + std::to_string(gas->delta);
        return label + ")";
    }
    const auto& bucketed = std::get<BucketedDefense>(defense);
    return "bucketing(" + std::string(rule_name(bucketed.rule)) + ",s=" + std::to_string(bucketed.bucket_size) + ")";
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n < 1) throw ConfigError("experiment.n", "must be >= 1");
    if (2 * cfg.f >= cfg.n) throw ConfigError("experiment.f", "must satisfy f < n/2");
    if (!(cfg.beta > 0.0)) throw ConfigError("experiment.beta", "must be > 0");
    if (cfg.rounds < 1) throw ConfigError("experiment.rounds", "must be >= 1");
    if (!(cfg.client_sample_ratio > 0.0 && cfg.client_sample_ratio <= 1.0))
        throw ConfigError("experiment.client_sample_ratio", "must be in (0, 1]");
    if (cfg.repeats < 1) throw ConfigError("experiment.repeats", "must be >= 1");
    if (cfg.dataset.classes < 2) throw ConfigError("dataset.classes", "must be >= 2");
    if (cfg.dataset.features < 1) throw ConfigError("dataset.features", "must be >= 1");
    if (cfg.dataset.per_class < 1) throw ConfigError("dataset.per_class", "must be >= 1");
    if (cfg.dataset.test_per_class < 1) throw ConfigError("dataset.test_per_class", "must be >= 1");
    if (!(cfg.dataset.noise >= 0.0)) throw ConfigError("dataset.noise", "must be >= 0");
    if (cfg.trainer.local_epochs < 1) throw ConfigError("trainer.local_epochs", "must be >= 1");
    if (cfg.trainer.batch_size < 1) throw ConfigError("trainer.batch_size", "must be >= 1");
    if (!(cfg.trainer.learning_rate >= 0.0)) throw ConfigError("trainer.learning_rate", "must be >= 0");
    if (cfg.trainer.clip_norm && !(*cfg.trainer.clip_norm > 0.0))
        throw ConfigError("trainer.clip_norm", "must be > 0 when enabled");
    if (const auto* mm = std::get_if<attacks::MinMax>(&cfg.attack); mm && !(mm->tau > 0.0))
        throw ConfigError("attack.tau", "must be > 0");
    if (const auto* ms = std::get_if<attacks::MinSum>(&cfg.attack); ms && !(ms->tau > 0.0))
        throw ConfigError("attack.tau", "must be > 0");
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PlainDefense>) {
                validate_rule(d.rule, "defense");
            } else if constexpr (std::is_same_v<T, GasDefense>) {
                validate_rule(d.base, "defense");
                if (d.groups < 1) throw ConfigError("defense.groups", "must be >= 1");
                if (!d.known_f && !(d.delta >= 0.0 && d.delta < 0.5))
                    throw ConfigError("defense.delta", "must be in [0, 0.5)");
            } else {
                validate_rule(d.rule, "defense");
                if (d.bucket_size < 1) throw ConfigError("defense.bucket_size", "must be >= 1");
            }
        },
        cfg.defense);
}

SimulationState make_state(const ExperimentConfig& cfg, std::size_t repeat) {
    validate(cfg);
    SimulationState s;
    s.run_seed = SeedSpec(cfg.seed).derive("repeat", repeat);
    s.arch = ModelArch{cfg.dataset.classes, cfg.dataset.features, cfg.hidden};
    s.weights = init_params(s.arch, s.run_seed.derive("init"));
    std::tie(s.train, s.test) = generate_synthetic(cfg.dataset, s.run_seed.derive("data"));
    s.shards = dirichlet_partition(s.train.y, cfg.n, cfg.beta, s.run_seed.derive("dirichlet"));

    std::vector<std::size_t> identities(cfg.n);
    std::iota(identities.begin(), identities.end(), std::size_t{0});
    auto rng = s.run_seed.derive("byzantine").engine();
    std::shuffle(identities.begin(), identities.end(), rng);
    s.is_byzantine.assign(cfg.n, 0);
    for (std::size_t k = 0; k < cfg.f; ++k) s.is_byzantine[identities[k]] = 1;
    return s;
}

std::vector<std::size_t> sample_clients(const SimulationState& state, const ExperimentConfig& cfg, std::size_t t) {
    std::vector<std::size_t> ids(cfg.n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    const auto want = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(cfg.client_sample_ratio * static_cast<double>(cfg.n))), 1, cfg.n);
    if (want < cfg.n) {
        auto rng = state.run_seed.derive("sample", t).engine();
        std::shuffle(ids.begin(), ids.end(), rng);
        ids.resize(want);
        std::sort(ids.begin(), ids.end());
    }
    // Clients holding no data sit the round out.
    std::erase_if(ids, [&](std::size_t id) { return state.shards.client_indices[id].empty(); });
    return ids;
}

RoundRecord run_round(SimulationState& state, const ExperimentConfig& cfg, std::size_t t, unsigned jobs) {
    const auto started = std::chrono::steady_clock::now();
    const auto sampled = sample_clients(state, cfg, t);
    const std::size_t k = sampled.size();

    std::vector<char> byz_at(k);
    std::size_t byz_sampled = 0;
    for (std::size_t pos = 0; pos < k; ++pos) byz_sampled += (byz_at[pos] = state.is_byzantine[sampled[pos]]);
    if (byz_sampled == k) throw Error("round " + std::to_string(t) + ": no honest client sampled");

    const bool train_byzantine = needs_own_gradients(cfg.attack);
    const bool flip = std::holds_alternative<attacks::LabelFlip>(cfg.attack);
    GradientList trained(k);
    parallel_for(k, jobs, [&](std::size_t pos) {
        if (byz_at[pos] && !train_byzantine) return;
        const std::size_t id = sampled[pos];
        trained[pos] = local_train(state.arch, state.weights, state.train, state.shards.client_indices[id], cfg.trainer,
                                   flip && byz_at[pos], state.run_seed.derive("client", id).derive("round", t));
    });

    GradientList honest, byz_true;
    for (std::size_t pos = 0; pos < k; ++pos) {
        if (byz_at[pos]) {
            if (train_byzantine) byz_true.push_back(trained[pos]);
        } else {
            honest.push_back(trained[pos]);
        }
    }
    const auto crafted =
        craft(cfg.attack, AttackContext{honest, byz_sampled, byz_true}, state.run_seed.derive("attack", t));

    GradientList uploads;
    uploads.reserve(k);
    std::size_t next_byz = 0, next_honest = 0;
    for (std::size_t pos = 0; pos < k; ++pos)
        uploads.push_back(byz_at[pos] ? crafted[next_byz++] : honest[next_honest++]);

    Aggregate agg;
    try {
        reject_nan(uploads);
        const SeedSpec defense_seed = state.run_seed.derive("defense", t);
        if (const auto* plain = std::get_if<PlainDefense>(&cfg.defense)) {
            agg = aggregate_detailed(plain->rule, uploads, byz_sampled, defense_seed);
        } else if (const auto* gas = std::get_if<GasDefense>(&cfg.defense)) {
            GasConfig gc;
            gc.groups = gas->groups;
            gc.base = gas->base;
            gc.selection = gas->known_f ? SelectionMode{KnownF{byz_sampled}} : SelectionMode{Ratio{gas->delta}};
            gc.partition_policy = gas->partition_policy;
            gc.seed = state.run_seed.derive("gas");
            auto res = gas_aggregate(gc, uploads, t, jobs);
            agg = Aggregate{std::move(res.aggregate), std::move(res.selection.selected)};
        } else {
            const auto& bucketed = std::get<BucketedDefense>(cfg.defense);
            agg = bucketing_wrap(bucketed.rule, uploads, byz_sampled, bucketed.bucket_size, defense_seed);
        }
    } catch (const Error& e) {
        throw Error("round " + std::to_string(t) + ": " + e.what());
    }

    state.weights -= agg.value;

    RoundRecord rec;
    rec.round = t;
    rec.deviation = deviation_metric(agg.value, honest);
    const auto inclusion = inclusion_metrics(agg.selected, byz_at);
    rec.honest_inclusion_ratio = inclusion.honest_ratio;
    rec.byz_inclusion_count = inclusion.byz_count;
    rec.test_accuracy = accuracy(state.arch, state.weights.values(), state.test);
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

ExperimentSummary summarize(const std::vector<std::vector<RoundRecord>>& runs) {
    ExperimentSummary s;
    for (const auto& run : runs) {
        double best = 0.0;
        for (const auto& r : run) best = std::max(best, r.test_accuracy);
        s.best_accuracy.push_back(best);
    }
    if (s.best_accuracy.empty()) return s;
    const auto count = static_cast<double>(s.best_accuracy.size());
    for (double b : s.best_accuracy) s.mean += b;
    s.mean /= count;
    for (double b : s.best_accuracy) s.stddev += (b - s.mean) * (b - s.mean);
    s.stddev = std::sqrt(s.stddev / count);
    return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs) {
    validate(cfg);
    ExperimentResult result;
    result.runs.reserve(cfg.repeats);
    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        auto state = make_state(cfg, r);
        std::vector<RoundRecord> records;
        records.reserve(cfg.rounds);
        for (std::size_t t = 0; t < cfg.rounds; ++t) records.push_back(run_round(state, cfg, t, jobs));
        result.runs.push_back(std::move(records));
    }
    result.summary = summarize(result.runs);
    return result;
}

}  // namespace gasfl::fedsim
