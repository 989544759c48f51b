#pragma once

// Seeded train/test partitioning with a fully specified generator so the
// same (n, fraction, seed) reproduces the same split on any platform:
// std::mt19937_64 raw draws, rejection-sampled to the bound, driving a
// Fisher-Yates shuffle of 0..n-1. The test set is the first
// round(n * test_fraction) entries of the shuffled order.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace sinistre {

struct SplitIndices {
    std::vector<std::size_t> train; // ascending
    std::vector<std::size_t> test;  // ascending
    std::uint64_t seed = 0;
    double test_fraction = 0.25;
};

namespace detail {

/// Unbiased draw in [0, bound): rejects raw values below 2^64 mod bound.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

} // namespace detail

/// Deterministic permutation of 0..n-1 under the documented generator.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i-- > 1;) {
        const std::uint64_t j = detail::bounded_draw(rng, static_cast<std::uint64_t>(i) + 1);
        std::swap(perm[i], perm[static_cast<std::size_t>(j)]);
    }
    return perm;
}

inline SplitIndices train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("train_test_split: need at least 2 rows");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("train_test_split: test_fraction must be in (0,1)");
    }
    const auto perm = seeded_permutation(n, seed);
    const auto test_size = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * test_fraction));

    SplitIndices split;
    split.seed = seed;
    split.test_fraction = test_fraction;
    split.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test_size));
    split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(test_size), perm.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

} // namespace sinistre
