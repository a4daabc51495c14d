#include "gasfl/cli/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "gasfl/error.hpp"

namespace gasfl::cli {

namespace {

using fedsim::BucketedDefense;
using fedsim::ExperimentConfig;
using fedsim::GasDefense;
using fedsim::PlainDefense;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Reads keys from one mapping and remembers which were consumed, so leftovers
// (typos) can be reported.
class Section {
public:
    Section(const YAML::Node& root, std::string name) : name_(std::move(name)), node_(root[name_]) {
        if (node_ && !node_.IsMap()) throw ConfigError(name_, "expected a mapping");
    }

    bool has(const std::string& key) const { return node_ && node_[key]; }

    std::string text(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        used_.insert(key);
        const auto n = node_[key];
        if (!n.IsScalar()) throw ConfigError(field(key), "expected a scalar");
        return n.Scalar();
    }

    double real(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const auto s = text(key, "");
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size()) throw ConfigError(field(key), "expected a number, got '" + s + "'");
        return v;
    }

    std::uint64_t count(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const auto s = text(key, "");
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || end != s.data() + s.size())
            throw ConfigError(field(key), "expected a non-negative integer, got '" + s + "'");
        return v;
    }

    void finish() const {
        if (!node_) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.Scalar();
            if (!used_.count(key)) throw ConfigError(field(key), "unknown key");
        }
    }

    std::string field(const std::string& key) const { return name_ + "." + key; }

private:
    std::string name_;
    YAML::Node node_;
    std::set<std::string> used_;
};

AggregatorSpec read_rule(Section& s, const std::string& key, const std::string& fallback) {
    AggregatorSpec rule;
    const auto name = s.text(key, fallback);
    try {
        rule = aggregator_from_name(name);
    } catch (const ConfigError& e) {
        throw ConfigError(s.field(key), "unknown aggregation rule '" + name + "'");
    }
    if (auto* gm = std::get_if<rules::GeometricMedian>(&rule)) {
        gm->iters = static_cast<int>(s.count("iters", static_cast<std::uint64_t>(gm->iters)));
        gm->smoothing = s.real("smoothing", gm->smoothing);
    }
    if (auto* d = std::get_if<rules::Dnc>(&rule)) {
        d->c = s.real("c", d->c);
        d->niters = static_cast<int>(s.count("niters", static_cast<std::uint64_t>(d->niters)));
        d->b = s.count("b", d->b);
    }
    return rule;
}

AttackSpec read_attack(Section& s) {
    const auto name = s.text("name", "lie");
    AttackSpec attack;
    try {
        attack = attack_from_name(name);
    } catch (const ConfigError&) {
        throw ConfigError("attack.name", "unknown attack '" + name + "'");
    }
    std::visit(overloaded{
                   [&](attacks::Lie& a) { a.z = s.real("z", a.z); },
                   [&](attacks::MinMax& a) {
                       a.gamma_init = s.real("gamma_init", a.gamma_init);
                       a.tau = s.real("tau", a.tau);
                   },
                   [&](attacks::MinSum& a) {
                       a.gamma_init = s.real("gamma_init", a.gamma_init);
                       a.tau = s.real("tau", a.tau);
                   },
                   [&](attacks::Ipm& a) { a.epsilon = s.real("epsilon", a.epsilon); },
                   [](auto&) {},
               },
               attack);
    return attack;
}

fedsim::DefenseSpec read_defense(Section& s) {
    const auto kind = s.text("kind", "plain");
    if (kind == "plain") return PlainDefense{read_rule(s, "rule", "mean")};
    if (kind == "gas") {
        GasDefense g;
        g.base = read_rule(s, "rule", "median");
        g.groups = s.count("groups", g.groups);
        const auto selection = s.text("selection", "known_f");
        if (selection == "known_f") {
            g.known_f = true;
        } else if (selection == "ratio") {
            g.known_f = false;
            g.delta = s.real("delta", 0.1);
        } else {
            throw ConfigError("defense.selection", "expected known_f or ratio, got '" + selection + "'");
        }
        const auto partition = s.text("partition", "per_round");
        if (partition == "per_round") {
            g.partition_policy = PartitionPolicy::PerRound;
        } else if (partition == "fixed") {
            g.partition_policy = PartitionPolicy::Fixed;
        } else {
            throw ConfigError("defense.partition", "expected per_round or fixed, got '" + partition + "'");
        }
        return g;
    }
    if (kind == "bucketing") {
        BucketedDefense b;
        b.rule = read_rule(s, "rule", "median");
        b.bucket_size = s.count("bucket_size", b.bucket_size);
        return b;
    }
    throw ConfigError("defense.kind", "expected plain, gas or bucketing, got '" + kind + "'");
}

ExperimentConfig read_config(const YAML::Node& root) {
    if (!root.IsMap()) throw ConfigError("config", "expected a mapping at top level");
    for (const auto& kv : root) {
        static const std::array<std::string, 5> known{"experiment", "dataset", "trainer", "attack", "defense"};
        const auto key = kv.first.Scalar();
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown section");
    }

    ExperimentConfig cfg;
    Section ex(root, "experiment");
    cfg.n = ex.count("n", cfg.n);
    cfg.f = ex.count("f", cfg.f);
    cfg.beta = ex.real("beta", cfg.beta);
    cfg.rounds = ex.count("rounds", cfg.rounds);
    cfg.client_sample_ratio = ex.real("client_sample_ratio", cfg.client_sample_ratio);
    cfg.repeats = ex.count("repeats", cfg.repeats);
    cfg.seed = ex.count("seed", cfg.seed);
    cfg.hidden = ex.count("hidden", cfg.hidden);
    ex.finish();

    Section ds(root, "dataset");
    cfg.dataset.classes = ds.count("classes", cfg.dataset.classes);
    cfg.dataset.features = ds.count("features", cfg.dataset.features);
    cfg.dataset.per_class = ds.count("per_class", cfg.dataset.per_class);
    cfg.dataset.test_per_class = ds.count("test_per_class", cfg.dataset.test_per_class);
    cfg.dataset.separation = ds.real("separation", cfg.dataset.separation);
    cfg.dataset.noise = ds.real("noise", cfg.dataset.noise);
    ds.finish();

    Section tr(root, "trainer");
    cfg.trainer.local_epochs = tr.count("local_epochs", cfg.trainer.local_epochs);
    cfg.trainer.batch_size = tr.count("batch_size", cfg.trainer.batch_size);
    cfg.trainer.learning_rate = tr.real("learning_rate", cfg.trainer.learning_rate);
    cfg.trainer.momentum = tr.real("momentum", cfg.trainer.momentum);
    cfg.trainer.weight_decay = tr.real("weight_decay", cfg.trainer.weight_decay);
    if (tr.has("clip_norm")) {
        if (tr.text("clip_norm", "") == "none")
            cfg.trainer.clip_norm.reset();
        else
            cfg.trainer.clip_norm = tr.real("clip_norm", 0.0);
    }
    tr.finish();

    Section at(root, "attack");
    cfg.attack = read_attack(at);
    at.finish();

    Section df(root, "defense");
    cfg.defense = read_defense(df);
    df.finish();

    fedsim::validate(cfg);
    return cfg;
}

YAML::Node parse_yaml(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError("config", std::string("malformed YAML: ") + e.what());
    }
}

class Writer {
public:
    void section(std::string_view name) { out_ << name << ":\n"; }
    void line(std::string_view key, std::string_view value, int indent = 2) {
        out_ << std::string(static_cast<std::size_t>(indent), ' ') << key << ": " << value << "\n";
    }
    void line(std::string_view key, std::uint64_t value, int indent = 2) { line(key, std::to_string(value), indent); }
    void real(std::string_view key, double value, int indent = 2) { line(key, format_double(value), indent); }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

void write_rule(Writer& w, const AggregatorSpec& rule, int indent) {
    w.line("rule", rule_name(rule), indent);
    if (const auto* gm = std::get_if<rules::GeometricMedian>(&rule)) {
        w.line("iters", static_cast<std::uint64_t>(gm->iters), indent);
        w.real("smoothing", gm->smoothing, indent);
    }
    if (const auto* d = std::get_if<rules::Dnc>(&rule)) {
        w.real("c", d->c, indent);
        w.line("niters", static_cast<std::uint64_t>(d->niters), indent);
        w.line("b", d->b, indent);
    }
}

void write_config(Writer& w, const ExperimentConfig& cfg, int indent) {
    const int inner = indent + 2;
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    w.section(pad + "experiment");
    w.line("n", cfg.n, inner);
    w.line("f", cfg.f, inner);
    w.real("beta", cfg.beta, inner);
    w.line("rounds", cfg.rounds, inner);
    w.real("client_sample_ratio", cfg.client_sample_ratio, inner);
    w.line("repeats", cfg.repeats, inner);
    w.line("seed", cfg.seed, inner);
    w.line("hidden", cfg.hidden, inner);

    w.section(pad + "dataset");
    w.line("classes", cfg.dataset.classes, inner);
    w.line("features", cfg.dataset.features, inner);
    w.line("per_class", cfg.dataset.per_class, inner);
    w.line("test_per_class", cfg.dataset.test_per_class, inner);
    w.real("separation", cfg.dataset.separation, inner);
    w.real("noise", cfg.dataset.noise, inner);

    w.section(pad + "trainer");
    w.line("local_epochs", cfg.trainer.local_epochs, inner);
    w.line("batch_size", cfg.trainer.batch_size, inner);
    w.real("learning_rate", cfg.trainer.learning_rate, inner);
    w.real("momentum", cfg.trainer.momentum, inner);
    w.real("weight_decay", cfg.trainer.weight_decay, inner);
    if (cfg.trainer.clip_norm)
        w.real("clip_norm", *cfg.trainer.clip_norm, inner);
    else
        w.line("clip_norm", "none", inner);

    w.section(pad + "attack");
    w.line("name", attack_name(cfg.attack), inner);
    std::visit(overloaded{
                   [&](const attacks::Lie& a) { w.real("z", a.z, inner); },
                   [&](const attacks::MinMax& a) {
                       w.real("gamma_init", a.gamma_init, inner);
                       w.real("tau", a.tau, inner);
                   },
                   [&](const attacks::MinSum& a) {
                       w.real("gamma_init", a.gamma_init, inner);
                       w.real("tau", a.tau, inner);
                   },
                   [&](const attacks::Ipm& a) { w.real("epsilon", a.epsilon, inner); },
                   [](const auto&) {},
               },
               cfg.attack);

    w.section(pad + "defense");
    std::visit(overloaded{
                   [&](const PlainDefense& d) {
                       w.line("kind", "plain", inner);
                       write_rule(w, d.rule, inner);
                   },
                   [&](const GasDefense& d) {
                       w.line("kind", "gas", inner);
                       write_rule(w, d.base, inner);
                       w.line("groups", d.groups, inner);
                       w.line("selection", d.known_f ? "known_f" : "ratio", inner);
                       if (!d.known_f) w.real("delta", d.delta, inner);
                       w.line("partition", d.partition_policy == PartitionPolicy::PerRound ? "per_round" : "fixed", inner);
                   },
                   [&](const BucketedDefense& d) {
                       w.line("kind", "bucketing", inner);
                       write_rule(w, d.rule, inner);
                       w.line("bucket_size", d.bucket_size, inner);
                   },
               },
               cfg.defense);
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

ExperimentConfig parse_config(std::string_view yaml_text) { return read_config(parse_yaml(yaml_text)); }

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    Writer w;
    write_config(w, cfg, 0);
    return w.str();
}

RunManifest parse_manifest(std::string_view yaml_text) {
    const auto root = parse_yaml(yaml_text);
    if (!root.IsMap() || !root["config"]) throw ConfigError("manifest.config", "missing");
    RunManifest m;
    m.config = read_config(root["config"]);
    auto scalar = [&](const char* key) -> std::string {
        if (!root[key] || !root[key].IsScalar()) throw ConfigError(std::string("manifest.") + key, "missing");
        return root[key].Scalar();
    };
    m.artifact_version = scalar("artifact_version");
    const auto seed = scalar("master_seed");
    const auto [end, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), m.master_seed);
    if (ec != std::errc{} || end != seed.data() + seed.size()) throw ConfigError("manifest.master_seed", "not an integer");
    m.csv_path = scalar("csv");
    m.summary_path = scalar("summary");
    return m;
}

std::string emit_manifest(const RunManifest& manifest) {
    Writer w;
    w.line("artifact_version", manifest.artifact_version, 0);
    w.line("master_seed", manifest.master_seed, 0);
    w.line("csv", manifest.csv_path, 0);
    w.line("summary", manifest.summary_path, 0);
    w.section("config");
    write_config(w, manifest.config, 2);
    return w.str();
}

}  // namespace gasfl::cli
