#include "gasfl/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gasfl/error.hpp"

namespace gasfl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_statistics(std::span<const GradientVector> honest, const char* who) {
    if (honest.size() < 2)
        throw PreconditionError(std::string(who) + " needs at least 2 honest gradients (std undefined)");
}

double max_pairwise_distance(std::span<const GradientVector> g) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) best = std::max(best, distance(g[i], g[j]));
    return best;
}

// mu - gamma * sigma without temporaries per candidate.
GradientVector shifted(const CoordinateStats& s, double gamma) {
    GradientVector v(s.mean.dim());
    for (std::size_t j = 0; j < v.dim(); ++j) v[j] = s.mean[j] - gamma * s.stddev[j];
    return v;
}

}  // namespace

std::string_view attack_name(const AttackSpec& spec) noexcept {
    return std::visit(overloaded{
                          [](const attacks::NoAttack&) -> std::string_view { return "none"; },
                          [](const attacks::BitFlip&) -> std::string_view { return "bit_flip"; },
                          [](const attacks::LabelFlip&) -> std::string_view { return "label_flip"; },
                          [](const attacks::Lie&) -> std::string_view { return "lie"; },
                          [](const attacks::MinMax&) -> std::string_view { return "min_max"; },
                          [](const attacks::MinSum&) -> std::string_view { return "min_sum"; },
                          [](const attacks::Ipm&) -> std::string_view { return "ipm"; },
                      },
                      spec);
}

AttackSpec attack_from_name(std::string_view name) {
    if (name == "none") return attacks::NoAttack{};
    if (name == "bit_flip") return attacks::BitFlip{};
    if (name == "label_flip") return attacks::LabelFlip{};
    if (name == "lie") return attacks::Lie{};
    if (name == "min_max") return attacks::MinMax{};
    if (name == "min_sum") return attacks::MinSum{};
    if (name == "ipm") return attacks::Ipm{};
    throw ConfigError("attack", "unknown attack '" + std::string(name) + "'");
}

CoordinateStats coordinate_stats(std::span<const GradientVector> honest) {
    CoordinateStats s;
    s.mean = mean(honest);
    s.stddev = GradientVector(s.mean.dim());
    for (const auto& g : honest) {
        for (std::size_t j = 0; j < g.dim(); ++j) {
            const double diff = g[j] - s.mean[j];
            s.stddev[j] += diff * diff;
        }
    }
    const auto n = static_cast<double>(honest.size());
    for (double& v : s.stddev) v = std::sqrt(v / n);
    return s;
}

GradientVector lie(std::span<const GradientVector> honest, double z) {
    require_statistics(honest, "LIE");
    const auto s = coordinate_stats(honest);
    return shifted(s, -z);
}

GradientVector min_max(std::span<const GradientVector> honest, double gamma_init, double tau) {
    require_statistics(honest, "Min-Max");
    const auto s = coordinate_stats(honest);
    if (l2_norm(s.stddev) == 0.0) return s.mean;
    const double bound = max_pairwise_distance(honest);
    auto feasible = [&](double gamma) {
        const auto v = shifted(s, gamma);
        double worst = 0.0;
        for (const auto& g : honest) worst = std::max(worst, distance(v, g));
        return worst <= bound;
    };
    return shifted(s, search_gamma(feasible, gamma_init, tau));
}

GradientVector min_sum(std::span<const GradientVector> honest, double gamma_init, double tau) {
    require_statistics(honest, "Min-Sum");
    const auto s = coordinate_stats(honest);
    if (l2_norm(s.stddev) == 0.0) return s.mean;
    double bound = 0.0;
    for (const auto& gj : honest) {
        double acc = 0.0;
        for (const auto& gi : honest) acc += squared_distance(gj, gi);
        bound = std::max(bound, acc);
    }
    auto feasible = [&](double gamma) {
        const auto v = shifted(s, gamma);
        double acc = 0.0;
        for (const auto& g : honest) acc += squared_distance(v, g);
        return acc <= bound;
    };
    return shifted(s, search_gamma(feasible, gamma_init, tau));
}

GradientVector ipm(std::span<const GradientVector> honest, double epsilon) {
    if (honest.empty()) throw PreconditionError("IPM needs at least 1 honest gradient");
    return mean(honest) * (-epsilon);
}

std::vector<GradientVector> craft(const AttackSpec& spec, const AttackContext& ctx, const SeedSpec&) {
    const std::size_t f = ctx.byz_count;
    auto copies = [f](GradientVector v) { return std::vector<GradientVector>(f, std::move(v)); };
    auto own = [&](const char* who) {
        if (ctx.byzantine_gradients.size() != f)
            throw PreconditionError(std::string(who) + " needs the Byzantine clients' own gradients");
        return std::vector<GradientVector>(ctx.byzantine_gradients.begin(), ctx.byzantine_gradients.end());
    };
    if (f == 0) return {};
    return std::visit(overloaded{
                          [&](const attacks::NoAttack&) { return own("NoAttack"); },
                          [&](const attacks::LabelFlip&) { return own("LabelFlip"); },
                          [&](const attacks::BitFlip&) {
                              auto out = own("BitFlip");
                              for (auto& g : out) g *= -1.0;
                              return out;
                          },
                          [&](const attacks::Lie& a) { return copies(lie(ctx.honest_gradients, a.z)); },
                          [&](const attacks::MinMax& a) {
                              return copies(min_max(ctx.honest_gradients, a.gamma_init, a.tau));
                          },
                          [&](const attacks::MinSum& a) {
                              return copies(min_sum(ctx.honest_gradients, a.gamma_init, a.tau));
                          },
                          [&](const attacks::Ipm& a) { return copies(ipm(ctx.honest_gradients, a.epsilon)); },
                      },
                      spec);
}

}  // namespace gasfl
