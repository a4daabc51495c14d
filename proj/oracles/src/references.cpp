#include "gasfl/oracles/references.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

namespace gasfl::oracles {

namespace {

std::vector<double> column(const GradientList& g, std::size_t j) {
    std::vector<double> c;
    for (const auto& v : g) c.push_back(v[j]);
    return c;
}

double sq_dist(const GradientVector& a, const GradientVector& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

double median_of_sorted(const std::vector<double>& s) {
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : (s[n / 2 - 1] + s[n / 2]) / 2.0;
}

}  // namespace

GradientVector median_by_sort(const GradientList& g) {
    GradientVector out(g.front().dim());
    for (std::size_t j = 0; j < out.dim(); ++j) {
        auto c = column(g, j);
        std::sort(c.begin(), c.end());
        out[j] = median_of_sorted(c);
    }
    return out;
}

GradientVector trimmed_mean_by_sort(const GradientList& g, std::size_t f) {
    GradientVector out(g.front().dim());
    for (std::size_t j = 0; j < out.dim(); ++j) {
        auto c = column(g, j);
        std::sort(c.begin(), c.end());
        double s = 0.0;
        for (std::size_t t = f; t + f < c.size(); ++t) s += c[t];
        out[j] = s / static_cast<double>(c.size() - 2 * f);
    }
    return out;
}

std::vector<double> krum_scores_brute(const GradientList& g, std::size_t f) {
    const std::size_t n = g.size();
    std::vector<std::vector<double>> per_client(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sq_dist(g[i], g[j]);
            per_client[i].push_back(d);
            per_client[j].push_back(d);
        }
    }
    std::vector<double> scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& list = per_client[i];
        std::sort(list.begin(), list.end());
        for (std::size_t t = 0; t < n - f - 2; ++t) scores[i] += list[t];
    }
    return scores;
}

BulyanTrace bulyan_reference(const GradientList& g, std::size_t f) {
    const std::size_t n = g.size();
    const std::size_t theta = n - 2 * f, beta = theta - 2 * f;
    std::vector<bool> taken(n, false);
    BulyanTrace trace;
    for (std::size_t round = 0; round < theta; ++round) {
        const std::size_t remaining = n - round;
        const long k_raw = static_cast<long>(remaining) - static_cast<long>(f) - 2;
        const std::size_t k = static_cast<std::size_t>(std::max(1L, std::min(k_raw, static_cast<long>(remaining) - 1)));
        std::size_t best = n;
        double best_score = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i]) continue;
            std::vector<double> d;
            for (std::size_t j = 0; j < n; ++j)
                if (!taken[j] && j != i) d.push_back(sq_dist(g[i], g[j]));
            std::sort(d.begin(), d.end());
            double s = 0.0;
            for (std::size_t t = 0; t < std::min(k, d.size()); ++t) s += d[t];
            if (best == n || s < best_score) {
                best = i;
                best_score = s;
            }
        }
        taken[best] = true;
        trace.picked.push_back(best);
    }

    GradientList chosen;
    for (std::size_t i : trace.picked) chosen.push_back(g[i]);
    trace.value = GradientVector(g.front().dim());
    for (std::size_t j = 0; j < trace.value.dim(); ++j) {
        auto c = column(chosen, j);
        auto sorted = c;
        std::sort(sorted.begin(), sorted.end());
        const double med = median_of_sorted(sorted);
        std::vector<std::pair<double, double>> keyed;
        for (double x : c) keyed.emplace_back(std::abs(x - med), x);
        std::sort(keyed.begin(), keyed.end());
        double s = 0.0;
        for (std::size_t t = 0; t < beta; ++t) s += keyed[t].second;
        trace.value[j] = s / static_cast<double>(beta);
    }
    return trace;
}

std::vector<GradientVector> weiszfeld_iterates(const GradientList& g, int iters, double smoothing) {
    const std::size_t dim = g.front().dim();
    GradientVector z(dim);
    for (const auto& v : g)
        for (std::size_t j = 0; j < dim; ++j) z[j] += v[j];
    for (std::size_t j = 0; j < dim; ++j) z[j] /= static_cast<double>(g.size());
    std::vector<GradientVector> out{z};
    for (int t = 0; t < iters; ++t) {
        std::vector<double> w;
        for (const auto& v : g) w.push_back(1.0 / std::max(smoothing, std::sqrt(sq_dist(v, z))));
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        GradientVector next(dim);
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) next[j] += w[i] * g[i][j];
        for (std::size_t j = 0; j < dim; ++j) next[j] /= total;
        z = next;
        out.push_back(z);
    }
    return out;
}

double sum_of_distances(const GradientList& g, const GradientVector& z) {
    double s = 0.0;
    for (const auto& v : g) s += std::sqrt(sq_dist(v, z));
    return s;
}

std::vector<double> top_eigenvector_dense(const SquareMatrix& m) {
    Eigen::MatrixXd a(m.n, m.n);
    for (std::size_t r = 0; r < m.n; ++r)
        for (std::size_t c = 0; c < m.n; ++c) a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    const Eigen::VectorXd top = solver.eigenvectors().col(static_cast<Eigen::Index>(m.n) - 1);
    return {top.data(), top.data() + top.size()};
}

SquareMatrix centred_gram(const GradientList& g) {
    const std::size_t n = g.size(), dim = g.front().dim();
    std::vector<double> mu(dim, 0.0);
    for (const auto& v : g)
        for (std::size_t j = 0; j < dim; ++j) mu[j] += v[j] / static_cast<double>(n);
    SquareMatrix gram(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t j = 0; j < dim; ++j) gram(r, c) += (g[r][j] - mu[j]) * (g[c][j] - mu[j]);
    return gram;
}

GradientList bucket_means_reference(const GradientList& g, std::size_t s, const SeedSpec& seed) {
    std::vector<std::size_t> perm(g.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto rng = seed.derive("bucketing").engine();
    std::shuffle(perm.begin(), perm.end(), rng);
    GradientList means;
    for (std::size_t lo = 0; lo < perm.size(); lo += s) {
        const std::size_t hi = std::min(perm.size(), lo + s);
        GradientVector m(g.front().dim());
        for (std::size_t t = lo; t < hi; ++t)
            for (std::size_t j = 0; j < m.dim(); ++j) m[j] += g[perm[t]][j];
        for (std::size_t j = 0; j < m.dim(); ++j) m[j] /= static_cast<double>(hi - lo);
        means.push_back(m);
    }
    return means;
}

}  // namespace gasfl::oracles
