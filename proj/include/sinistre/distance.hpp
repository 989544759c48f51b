#pragma once

// Minkowski-family distances. The Minkowski distance of order p is
// (sum_i |x_i - y_i|^p)^(1/p): Manhattan at p=1, Euclidean at p=2, and the
// Chebyshev (max-coordinate) distance in the p -> infinity limit. Orders
// below 1 break the triangle inequality and are rejected.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace sinistre {

struct DistanceMetric {
    enum class Kind { minkowski, chebyshev };

    Kind kind = Kind::minkowski;
    double order = 2.0; // only meaningful for minkowski

    static DistanceMetric minkowski(double order) {
        if (!(order >= 1.0)) {
            throw std::invalid_argument("minkowski order must be >= 1, got " +
                                        std::to_string(order));
        }
        return {Kind::minkowski, order};
    }
    static DistanceMetric euclidean() { return {Kind::minkowski, 2.0}; }
    static DistanceMetric manhattan() { return {Kind::minkowski, 1.0}; }
    static DistanceMetric chebyshev() { return {Kind::chebyshev, 0.0}; }

    bool operator==(const DistanceMetric&) const = default;
};

namespace detail {

inline void check_same_length(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("distance: vector lengths differ (" +
                                    std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + ")");
    }
}

} // namespace detail

inline double minkowski_distance(std::span<const double> x, std::span<const double> y,
                                 double order) {
    detail::check_same_length(x, y);
    if (!(order >= 1.0)) {
        throw std::invalid_argument("minkowski order must be >= 1, got " + std::to_string(order));
    }
    if (order == 1.0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
        return sum;
    }
    if (order == 2.0) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            sum += d * d;
        }
        return std::sqrt(sum);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += std::pow(std::abs(x[i] - y[i]), order);
    }
    return std::pow(sum, 1.0 / order);
}

inline double chebyshev_distance(std::span<const double> x, std::span<const double> y) {
    detail::check_same_length(x, y);
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        best = std::max(best, std::abs(x[i] - y[i]));
    }
    return best;
}

inline double metric_distance(std::span<const double> x, std::span<const double> y,
                              const DistanceMetric& metric) {
    return metric.kind == DistanceMetric::Kind::chebyshev
               ? chebyshev_distance(x, y)
               : minkowski_distance(x, y, metric.order);
}

} // namespace sinistre
