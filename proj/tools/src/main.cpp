#include <CLI11.hpp>

#include <iostream>

#include "gasfl/cli/commands.hpp"
#include "gasfl/cli/config_io.hpp"

namespace {

void add_run_flags(CLI::App* cmd, gasfl::cli::RunOptions& opts, std::uint64_t& seed) {
    cmd->add_option("--config", opts.config, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out, "Output directory")->required();
    cmd->add_option("--seed", seed, "Override experiment.seed");
    cmd->add_option("--jobs", opts.jobs, "Worker threads for client training")->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", opts.timing, "Record per-round wall time in the CSV");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace gasfl::cli;
    CLI::App app{"Byzantine-robust aggregation and gradient splitting for federated learning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kArtifactVersion));

    RunOptions run;
    std::uint64_t run_seed = 0;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment");
    add_run_flags(run_cmd, run, run_seed);

    SweepOptions sweep;
    std::uint64_t sweep_seed = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one experiment per value of an axis");
    add_run_flags(sweep_cmd, sweep.run, sweep_seed);
    sweep_cmd->add_option("--axis", sweep.axis, "p, delta, beta, f or n")->required();
    sweep_cmd->add_option("--values", sweep.values, "Values (comma separated; 'd' means the model dimension for p)")
        ->required()
        ->delimiter(',');

    CertifyOptions certify;
    auto* certify_cmd = app.add_subcommand("certify", "Estimate (f, lambda)-resilience of a rule");
    certify_cmd->add_option("--rule", certify.rule, "Aggregation rule")->required();
    certify_cmd->add_option("--n", certify.n, "Clients");
    certify_cmd->add_option("--f", certify.f, "Byzantine clients");
    certify_cmd->add_option("--dim", certify.dim, "Dimension");
    certify_cmd->add_option("--trials", certify.trials, "Adversarial trials");
    certify_cmd->add_option("--seed", certify.seed, "Master seed");
    certify_cmd->add_option("--scale", certify.scale, "Adversary distance from the honest mean");
    certify_cmd->add_option("--out", certify.out, "Report file");

    OracleOptions oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Cross-check aggregators against brute-force references");
    oracle_cmd->add_option("suite", oracle.suite, "median, trimmed_mean, krum, bulyan, weiszfeld, dnc, gas or all")
        ->required();
    oracle_cmd->add_option("--seed", oracle.seed, "Master seed");
    oracle_cmd->add_option("--trials", oracle.instances, "Random instances per suite");
    oracle_cmd->add_flag("--inject-fault", oracle.inject_fault, "Perturb library outputs (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (run_cmd->parsed()) {
        if (run_cmd->count("--seed")) run.seed = run_seed;
        return cmd_run(run, std::cout, std::cerr);
    }
    if (sweep_cmd->parsed()) {
        if (sweep_cmd->count("--seed")) sweep.run.seed = sweep_seed;
        return cmd_sweep(sweep, std::cout, std::cerr);
    }
    if (certify_cmd->parsed()) return cmd_certify(certify, std::cout, std::cerr);
    return cmd_oracle(oracle, std::cout, std::cerr);
}
