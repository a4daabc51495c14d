#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gasfl/aggregators.hpp"
#include "gasfl/attacks.hpp"
#include "gasfl/fedsim/dataset.hpp"
#include "gasfl/fedsim/model.hpp"
#include "gasfl/fedsim/trainer.hpp"
#include "gasfl/gas.hpp"
#include "gasfl/seed.hpp"

namespace gasfl::fedsim {

struct PlainDefense {
    AggregatorSpec rule = rules::Mean{};
};

/// GAS over `base`. Known-f mode hands the base rule the number of Byzantine
/// clients sampled this round; ratio mode removes ceil(delta * sampled).
struct GasDefense {
    std::size_t groups = 10;
    AggregatorSpec base = rules::Median{};
    bool known_f = true;
    double delta = 0.0;
    PartitionPolicy partition_policy = PartitionPolicy::PerRound;
};

struct BucketedDefense {
    AggregatorSpec rule = rules::Median{};
    std::size_t bucket_size = 2;
};

using DefenseSpec = std::variant<PlainDefense, GasDefense, BucketedDefense>;

std::string defense_label(const DefenseSpec& defense);

struct ExperimentConfig {
    std::size_t n = 50;
    std::size_t f = 10;
    double beta = 0.5;
    std::size_t rounds = 200;
    double client_sample_ratio = 1.0;
    AttackSpec attack = attacks::Lie{};
    DefenseSpec defense = PlainDefense{};
    TrainerConfig trainer;
    DatasetParams dataset;
    std::size_t hidden = 0;  ///< 0 = softmax classifier
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

struct RoundRecord {
    std::size_t round = 0;
    double test_accuracy = 0.0;
    double deviation = 0.0;
    double honest_inclusion_ratio = 0.0;
    std::size_t byz_inclusion_count = 0;
    double wall_time = 0.0;  ///< seconds
};

/// Everything one repeat carries between rounds.
struct SimulationState {
    ModelArch arch;
    GradientVector weights;
    SyntheticDataset train;
    SyntheticDataset test;
    DirichletPartition shards;
    std::vector<char> is_byzantine;  ///< indexed by client id
    SeedSpec run_seed;
};

/// Seed of repeat r: SeedSpec(cfg.seed).derive("repeat", r).
SimulationState make_state(const ExperimentConfig& cfg, std::size_t repeat);

/// Clients sampled in round t (ascending ids), a pure function of (run seed, t).
std::vector<std::size_t> sample_clients(const SimulationState& state, const ExperimentConfig& cfg, std::size_t t);

/// One communication round: sample, train, attack, defend, update. Defense errors
/// are rethrown as gasfl::Error with the round in the message.
RoundRecord run_round(SimulationState& state, const ExperimentConfig& cfg, std::size_t t, unsigned jobs = 1);

struct ExperimentSummary {
    std::vector<double> best_accuracy;  ///< per repeat
    double mean = 0.0;
    double stddev = 0.0;  ///< population standard deviation
};

struct ExperimentResult {
    std::vector<std::vector<RoundRecord>> runs;
    ExperimentSummary summary;
};

ExperimentSummary summarize(const std::vector<std::vector<RoundRecord>>& runs);

/// `jobs` parallelises client training inside each round; results do not depend on it.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

}  // namespace gasfl::fedsim
