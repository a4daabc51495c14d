#include "gasfl/fedsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gasfl/error.hpp"

namespace gasfl::fedsim {

std::size_t ModelArch::param_count() const noexcept {
    if (hidden == 0) return classes * features + classes;
    return hidden * features + hidden + classes * hidden + classes;
}

GradientVector init_params(const ModelArch& arch, const SeedSpec& seed) {
    GradientVector w(arch.param_count());
    if (arch.hidden == 0) return w;
    auto rng = seed.engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(arch.features));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(arch.hidden));
    std::size_t k = 0;
    for (std::size_t t = 0; t < arch.hidden * arch.features; ++t) w[k++] = s1 * gauss(rng);
    k += arch.hidden;
    for (std::size_t t = 0; t < arch.classes * arch.hidden; ++t) w[k++] = s2 * gauss(rng);
    return w;
}

namespace {

// Turns logits into probabilities in place; returns log-sum-exp of the logits.
double softmax_inplace(std::vector<double>& logits) {
    const double peak = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double& v : logits) z += (v = std::exp(v - peak));
    for (double& v : logits) v /= z;
    return peak + std::log(z);
}

struct Forward {
    std::vector<double> hidden;  // tanh activations (MLP only)
    std::vector<double> logits;
};

void forward(const ModelArch& a, std::span<const double> w, std::span<const double> x, Forward& out) {
    const std::size_t C = a.classes, m = a.features, h = a.hidden;
    out.logits.assign(C, 0.0);
    if (h == 0) {
        const double* W = w.data();
        const double* b = w.data() + C * m;
        for (std::size_t c = 0; c < C; ++c) {
            double acc = b[c];
            const double* row = W + c * m;
            for (std::size_t j = 0; j < m; ++j) acc += row[j] * x[j];
            out.logits[c] = acc;
        }
        return;
    }
    const double* W1 = w.data();
    const double* b1 = W1 + h * m;
    const double* W2 = b1 + h;
    const double* b2 = W2 + C * h;
    out.hidden.assign(h, 0.0);
    for (std::size_t k = 0; k < h; ++k) {
        double acc = b1[k];
        const double* row = W1 + k * m;
        for (std::size_t j = 0; j < m; ++j) acc += row[j] * x[j];
        out.hidden[k] = std::tanh(acc);
    }
    for (std::size_t c = 0; c < C; ++c) {
        double acc = b2[c];
        const double* row = W2 + c * h;
        for (std::size_t k = 0; k < h; ++k) acc += row[k] * out.hidden[k];
        out.logits[c] = acc;
    }
}

void check_shapes(const ModelArch& a, std::span<const double> w, const SyntheticDataset& data,
                  std::span<const int> labels) {
    detail::require(w.size() == a.param_count(), "model: parameter vector has the wrong dimension");
    detail::require(data.features == a.features, "model: feature dimension mismatch");
    detail::require(labels.size() == data.size(), "model: label count mismatch");
}

}  // namespace

double loss_and_gradient(const ModelArch& a, std::span<const double> w, const SyntheticDataset& data,
                         std::span<const int> labels, std::span<const std::size_t> rows, std::span<double> grad) {
    check_shapes(a, w, data, labels);
    detail::require(grad.size() == w.size(), "model: gradient buffer has the wrong dimension");
    detail::require(!rows.empty(), "model: empty batch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t C = a.classes, m = a.features, h = a.hidden;
    const double inv = 1.0 / static_cast<double>(rows.size());
    Forward fw;
    std::vector<double> dhidden(h);
    double total = 0.0;
    for (std::size_t r : rows) {
        const auto x = data.row(r);
        const auto y = static_cast<std::size_t>(labels[r]);
        forward(a, w, x, fw);
        const double target_logit = fw.logits[y];
        total += softmax_inplace(fw.logits) - target_logit;
        auto& prob = fw.logits;
        prob[y] -= 1.0;  // dL/dlogit
        if (h == 0) {
            double* gW = grad.data();
            double* gb = grad.data() + C * m;
            for (std::size_t c = 0; c < C; ++c) {
                const double d = prob[c] * inv;
                double* row = gW + c * m;
                for (std::size_t j = 0; j < m; ++j) row[j] += d * x[j];
                gb[c] += d;
            }
            continue;
        }
        const double* W2 = w.data() + h * m + h;
        double* gW1 = grad.data();
        double* gb1 = gW1 + h * m;
        double* gW2 = gb1 + h;
        double* gb2 = gW2 + C * h;
        std::fill(dhidden.begin(), dhidden.end(), 0.0);
        for (std::size_t c = 0; c < C; ++c) {
            const double d = prob[c] * inv;
            double* row = gW2 + c * h;
            const double* wrow = W2 + c * h;
            for (std::size_t k = 0; k < h; ++k) {
                row[k] += d * fw.hidden[k];
                dhidden[k] += d * wrow[k];
            }
            gb2[c] += d;
        }
        for (std::size_t k = 0; k < h; ++k) {
            const double d = dhidden[k] * (1.0 - fw.hidden[k] * fw.hidden[k]);
            double* row = gW1 + k * m;
            for (std::size_t j = 0; j < m; ++j) row[j] += d * x[j];
            gb1[k] += d;
        }
    }
    return total * inv;
}

double loss(const ModelArch& a, std::span<const double> w, const SyntheticDataset& data, std::span<const int> labels,
            std::span<const std::size_t> rows) {
    check_shapes(a, w, data, labels);
    Forward fw;
    double total = 0.0;
    for (std::size_t r : rows) {
        forward(a, w, data.row(r), fw);
        const double peak = *std::max_element(fw.logits.begin(), fw.logits.end());
        double z = 0.0;
        for (double v : fw.logits) z += std::exp(v - peak);
        total += peak + std::log(z) - fw.logits[static_cast<std::size_t>(labels[r])];
    }
    return total / static_cast<double>(rows.size());
}

int predict(const ModelArch& a, std::span<const double> w, std::span<const double> features) {
    Forward fw;
    forward(a, w, features, fw);
    return static_cast<int>(std::max_element(fw.logits.begin(), fw.logits.end()) - fw.logits.begin());
}

double accuracy(const ModelArch& a, std::span<const double> w, const SyntheticDataset& data) {
    detail::require(w.size() == a.param_count(), "model: parameter vector has the wrong dimension");
    if (data.size() == 0) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (predict(a, w, data.row(i)) == data.y[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace gasfl::fedsim
