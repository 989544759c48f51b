#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "sinistre/distance.hpp"

using namespace sinistre;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = dist(rng);
    return v;
}

const std::vector<DistanceMetric> kMetrics{
    DistanceMetric::minkowski(1.0), DistanceMetric::minkowski(1.5),
    DistanceMetric::minkowski(2.0), DistanceMetric::minkowski(3.0),
    DistanceMetric::chebyshev()};

} // namespace

TEST_CASE("hand-checked distances") {
    const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
    CHECK(minkowski_distance(a, b, 2.0) == 5.0);
    CHECK(minkowski_distance(a, b, 1.0) == 7.0);
    CHECK(chebyshev_distance(a, b) == 4.0);
    CHECK(minkowski_distance(b, b, 3.7) == 0.0);
    CHECK(chebyshev_distance(b, b) == 0.0);
}

TEST_CASE("invalid arguments are rejected") {
    const std::vector<double> a{1.0, 2.0}, b{1.0};
    CHECK_THROWS_AS(minkowski_distance(a, b, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_distance(a, b), std::invalid_argument);
    CHECK_THROWS_AS(minkowski_distance(a, a, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(DistanceMetric::minkowski(0.99), std::invalid_argument);
}

TEST_CASE("metric axioms hold on 1000 random triples per metric") {
    std::mt19937 rng(7);
    for (const auto& metric : kMetrics) {
        for (int trial = 0; trial < 1000; ++trial) {
            const auto x = random_vec(rng, 8);
            const auto y = random_vec(rng, 8);
            const auto z = random_vec(rng, 8);
            const double dxy = metric_distance(x, y, metric);
            const double dyx = metric_distance(y, x, metric);
            const double dxz = metric_distance(x, z, metric);
            const double dyz = metric_distance(y, z, metric);

            REQUIRE(dxy >= 0.0);                      // non-negativity
            REQUIRE(metric_distance(x, x, metric) == 0.0); // identity
            REQUIRE(dxy > 0.0);                       // distinct random points
            REQUIRE(dxy == dyx);                      // symmetry, exact
            REQUIRE(dxz <= dxy + dyz + 1e-12);        // triangle inequality
        }
    }
}

TEST_CASE("minkowski distance is non-increasing in the order") {
    std::mt19937 rng(11);
    const std::vector<double> orders{1.0, 1.5, 2.0, 3.0, 8.0};
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = random_vec(rng, 12);
        const auto y = random_vec(rng, 12);
        double prev = std::numeric_limits<double>::infinity();
        for (double order : orders) {
            const double d = minkowski_distance(x, y, order);
            CHECK(d <= prev + 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("high-order minkowski brackets chebyshev") {
    // 20-dimensional bound: chebyshev <= M_64 <= 20^(1/64) * chebyshev < 1.25 * chebyshev
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_vec(rng, 20);
        const auto y = random_vec(rng, 20);
        const double cheb = chebyshev_distance(x, y);
        const double m64 = minkowski_distance(x, y, 64.0);
        CHECK(cheb <= m64 + 1e-12);
        CHECK(m64 <= 1.25 * cheb);
    }
}
