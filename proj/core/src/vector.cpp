#include "gasfl/vector.hpp"

#include <cmath>
#include <string>

#include "gasfl/error.hpp"

namespace gasfl {

namespace {
void check_same_dim(const GradientVector& a, const GradientVector& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw PreconditionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
    }
}
}  // namespace

GradientVector& GradientVector::operator+=(const GradientVector& other) {
    check_same_dim(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GradientVector& GradientVector::operator-=(const GradientVector& other) {
    check_same_dim(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GradientVector& GradientVector::operator*=(double scale) noexcept {
    for (double& v : values_) v *= scale;
    return *this;
}

bool GradientVector::all_finite() const noexcept {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool GradientVector::has_nan() const noexcept {
    for (double v : values_)
        if (std::isnan(v)) return true;
    return false;
}

GradientVector operator+(GradientVector lhs, const GradientVector& rhs) { return lhs += rhs; }
GradientVector operator-(GradientVector lhs, const GradientVector& rhs) { return lhs -= rhs; }
GradientVector operator*(GradientVector v, double scale) { return v *= scale; }
GradientVector operator*(double scale, GradientVector v) { return v *= scale; }

double dot(const GradientVector& a, const GradientVector& b) {
    check_same_dim(a, b, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(const GradientVector& g) noexcept {
    double acc = 0.0;
    for (double v : g) acc += v * v;
    return std::sqrt(acc);
}

double squared_distance(const GradientVector& a, const GradientVector& b) {
    check_same_dim(a, b, "distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

double distance(const GradientVector& a, const GradientVector& b) { return std::sqrt(squared_distance(a, b)); }

std::size_t common_dim(std::span<const GradientVector> gradients, const char* who) {
    if (gradients.empty()) throw PreconditionError(std::string(who) + ": empty gradient list");
    const std::size_t dim = gradients.front().dim();
    for (const auto& g : gradients) {
        if (g.dim() != dim) {
            throw PreconditionError(std::string(who) + ": dimension mismatch (" + std::to_string(dim) + " vs " +
                                    std::to_string(g.dim()) + ")");
        }
    }
    return dim;
}

GradientVector mean(std::span<const GradientVector> gradients) {
    const std::size_t dim = common_dim(gradients, "mean");
    GradientVector out(dim);
    for (const auto& g : gradients)
        for (std::size_t j = 0; j < dim; ++j) out[j] += g[j];
    const auto n = static_cast<double>(gradients.size());
    for (double& v : out) v /= n;
    return out;
}

GradientVector mean_of(std::span<const GradientVector> gradients, std::span<const std::size_t> indices) {
    detail::require(!indices.empty(), "mean_of: empty selection");
    const std::size_t dim = common_dim(gradients, "mean_of");
    GradientVector out(dim);
    for (std::size_t i : indices) {
        detail::require(i < gradients.size(), "mean_of: index out of range");
        const auto& g = gradients[i];
        for (std::size_t j = 0; j < dim; ++j) out[j] += g[j];
    }
    const auto n = static_cast<double>(indices.size());
    for (double& v : out) v /= n;
    return out;
}

void reject_nan(std::span<const GradientVector> gradients) {
    for (std::size_t i = 0; i < gradients.size(); ++i) {
        if (gradients[i].has_nan())
            throw InvalidInputError("gradient " + std::to_string(i) + " contains NaN; rejected at ingress");
    }
}

}  // namespace gasfl
