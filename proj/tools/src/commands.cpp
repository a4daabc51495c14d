#include "gasfl/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gasfl/cli/config_io.hpp"
#include "gasfl/error.hpp"
#include "gasfl/oracles/suites.hpp"
#include "gasfl/resilience.hpp"

namespace gasfl::cli {

namespace fs = std::filesystem;
using fedsim::ExperimentConfig;
using fedsim::ExperimentResult;

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out.flush()) throw Error("cannot write '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

std::uint64_t parse_count(const std::string& field, const std::string& s) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) throw ConfigError(field, "expected an integer, got '" + s + "'");
    return v;
}

double parse_real(const std::string& field, const std::string& s) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) throw ConfigError(field, "expected a number, got '" + s + "'");
    return v;
}

ExperimentResult execute(const ExperimentConfig& cfg, const fs::path& dir, const RunOptions& opts) {
    auto result = fedsim::run_experiment(cfg, opts.jobs);
    RunManifest manifest;
    manifest.config = cfg;
    manifest.master_seed = cfg.seed;
    write_atomic(dir / manifest.csv_path, rounds_csv(result, opts.timing));
    write_atomic(dir / manifest.summary_path, summary_text(cfg, result));
    write_atomic(dir / "manifest.yaml", emit_manifest(manifest));
    return result;
}

}  // namespace

std::string rounds_csv(const ExperimentResult& result, bool timing) {
    std::string csv = "round,repeat,accuracy,deviation,honest_ratio,byz_count,wall_time\n";
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        for (const auto& rec : result.runs[r]) {
            csv += std::to_string(rec.round) + "," + std::to_string(r) + "," + g17(rec.test_accuracy) + "," +
                   g17(rec.deviation) + "," + g17(rec.honest_inclusion_ratio) + "," +
                   std::to_string(rec.byz_inclusion_count) + "," + g17(timing ? rec.wall_time : 0.0) + "\n";
        }
    }
    return csv;
}

std::string summary_text(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::ostringstream s;
    s << "defense: " << fedsim::defense_label(cfg.defense) << "\n";
    s << "attack: " << attack_name(cfg.attack) << "\n";
    s << "repeats: " << result.runs.size() << "\n";
    s << "rounds: " << cfg.rounds << "\n";
    s << "best_accuracy_mean: " << g17(result.summary.mean) << "\n";
    s << "best_accuracy_std: " << g17(result.summary.stddev) << "\n";
    s << "best_accuracy:";
    for (double b : result.summary.best_accuracy) s << " " << g17(b);
    s << "\n";
    return s.str();
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, const std::string& axis, const std::string& value,
                                   std::size_t index, std::uint64_t master_seed) {
    ExperimentConfig cfg = base;
    cfg.seed = SeedSpec(master_seed).derive("sweep-" + axis, index).key();
    const std::string field = "sweep." + axis;
    auto* gas = std::get_if<fedsim::GasDefense>(&cfg.defense);
    if (axis == "p") {
        if (!gas) throw ConfigError(field, "p sweep needs a gas defense");
        gas->groups = value == "d" ? fedsim::ModelArch{cfg.dataset.classes, cfg.dataset.features, cfg.hidden}.param_count()
                                   : parse_count(field, value);
    } else if (axis == "delta") {
        if (!gas) throw ConfigError(field, "delta sweep needs a gas defense");
        gas->known_f = false;
        gas->delta = parse_real(field, value);
    } else if (axis == "beta") {
        cfg.beta = parse_real(field, value);
    } else if (axis == "f") {
        cfg.f = parse_count(field, value);
    } else if (axis == "n") {
        // The Byzantine fraction stays as configured.
        cfg.n = parse_count(field, value);
        cfg.f = static_cast<std::size_t>(
            std::llround(static_cast<double>(base.f) * static_cast<double>(cfg.n) / static_cast<double>(base.n)));
    } else {
        throw ConfigError("sweep.axis", "expected one of p, delta, beta, f, n, got '" + axis + "'");
    }
    fedsim::validate(cfg);
    return cfg;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_config(opts.config);
        if (opts.seed) cfg.seed = *opts.seed;
        const auto result = execute(cfg, opts.out, opts);
        out << fedsim::defense_label(cfg.defense) << " vs " << attack_name(cfg.attack)
            << ": best accuracy " << g17(result.summary.mean) << " +- " << g17(result.summary.stddev) << "\n";
        return int{kOk};
    });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto base = load_config(opts.run.config);
        if (opts.run.seed) base.seed = *opts.run.seed;
        if (opts.values.empty()) throw ConfigError("sweep.values", "no values given");
        std::vector<ExperimentConfig> points;
        for (std::size_t k = 0; k < opts.values.size(); ++k)
            points.push_back(apply_sweep_value(base, opts.axis, opts.values[k], k, base.seed));

        std::string combined = opts.axis + ",round,repeat,accuracy,deviation,honest_ratio,byz_count,wall_time\n";
        std::string table = opts.axis + ",best_accuracy_mean,best_accuracy_std\n";
        for (std::size_t k = 0; k < points.size(); ++k) {
            const auto dir = opts.run.out / (opts.axis + "-" + std::to_string(k));
            const auto result = execute(points[k], dir, opts.run);
            const auto csv = rounds_csv(result, opts.run.timing);
            std::istringstream rows(csv);
            std::string row;
            std::getline(rows, row);
            while (std::getline(rows, row)) combined += opts.values[k] + "," + row + "\n";
            table += opts.values[k] + "," + g17(result.summary.mean) + "," + g17(result.summary.stddev) + "\n";
            out << opts.axis << "=" << opts.values[k] << ": best accuracy " << g17(result.summary.mean) << " +- "
                << g17(result.summary.stddev) << "\n";
        }
        write_atomic(opts.run.out / "sweep.csv", combined);
        write_atomic(opts.run.out / "sweep_summary.csv", table);
        return int{kOk};
    });
}

int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto spec = aggregator_from_name(opts.rule);
        try {
            check_preconditions(spec, opts.n, opts.f);
        } catch (const PreconditionError& e) {
            throw ConfigError("rule", e.what());
        }
        if (opts.dim < 1) throw ConfigError("dim", "must be >= 1");
        if (opts.trials < 1) throw ConfigError("trials", "must be >= 1");
        ResilienceOptions ro;
        ro.adversary_scale = opts.scale;
        const auto rep = estimate_resilience(spec, opts.n, opts.f, opts.dim, opts.trials, SeedSpec(opts.seed), ro);

        std::ostringstream s;
        s << "rule: " << opts.rule << "\n"
          << "n: " << rep.n << "\n"
          << "f: " << rep.f << "\n"
          << "dim: " << rep.dim << "\n"
          << "trials: " << rep.trials << "\n"
          << "skipped: " << rep.skipped << "\n"
          << "seed: " << opts.seed << "\n"
          << "adversary_scale: " << g17(opts.scale) << "\n"
          << "lambda_hat: " << g17(rep.lambda_hat) << "\n"
          << "finite: " << (std::isfinite(rep.lambda_hat) ? "true" : "false") << "\n";
        if (!opts.out.empty()) write_atomic(opts.out, s.str());
        out << s.str();
        return int{kOk};
    });
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> suites;
        if (opts.suite == "all") {
            suites = oracles::suite_names();
        } else {
            const auto& known = oracles::suite_names();
            if (std::find(known.begin(), known.end(), opts.suite) == known.end())
                throw ConfigError("suite", "unknown oracle suite '" + opts.suite + "'");
            suites.push_back(opts.suite);
        }
        int code = kOk;
        for (const auto& name : suites) {
            const auto rep = oracles::run_suite(name, opts.seed, opts.instances, opts.inject_fault);
            out << "suite=" << rep.suite << " instances=" << rep.instances << " max_discrepancy=" << g17(rep.max_discrepancy)
                << " tolerance=" << g17(rep.tolerance);
            if (rep.passed) {
                out << " PASS\n";
            } else {
                out << " FAIL failing_seed=" << rep.failing_seed << " (" << rep.failure << ")\n";
                code = kCheckFailed;
            }
        }
        return code;
    });
}

}  // namespace gasfl::cli
