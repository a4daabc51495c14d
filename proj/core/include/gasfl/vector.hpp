#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gasfl {

/// Dense vector of model-parameter deltas. Holds client gradients, aggregates and
/// honest means alike.
class GradientVector {
public:
    GradientVector() = default;
    explicit GradientVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
    explicit GradientVector(std::vector<double> values) : values_(std::move(values)) {}
    GradientVector(std::initializer_list<double> values) : values_(values) {}

    std::size_t dim() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& raw() const noexcept { return values_; }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    GradientVector& operator+=(const GradientVector& other);
    GradientVector& operator-=(const GradientVector& other);
    GradientVector& operator*=(double scale) noexcept;

    bool all_finite() const noexcept;
    bool has_nan() const noexcept;

    friend bool operator==(const GradientVector&, const GradientVector&) = default;

private:
    std::vector<double> values_;
};

GradientVector operator+(GradientVector lhs, const GradientVector& rhs);
GradientVector operator-(GradientVector lhs, const GradientVector& rhs);
GradientVector operator*(GradientVector v, double scale);
GradientVector operator*(double scale, GradientVector v);

using GradientList = std::vector<GradientVector>;

double dot(const GradientVector& a, const GradientVector& b);
double l2_norm(const GradientVector& g) noexcept;
double squared_distance(const GradientVector& a, const GradientVector& b);
double distance(const GradientVector& a, const GradientVector& b);

/// Coordinate-wise arithmetic mean. Summation runs in list order, then divides by n.
GradientVector mean(std::span<const GradientVector> gradients);

/// Mean of the gradients at `indices`, summed in the order the indices are given.
GradientVector mean_of(std::span<const GradientVector> gradients, std::span<const std::size_t> indices);

/// Throws PreconditionError unless the list is nonempty and every vector shares one dimension.
std::size_t common_dim(std::span<const GradientVector> gradients, const char* who);

/// Server ingress check: rejects any vector holding a NaN.
void reject_nan(std::span<const GradientVector> gradients);

}  // namespace gasfl
