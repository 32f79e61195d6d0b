#include <doctest.h>

#include <cmath>
#include <set>

#include "bsvi/rng.hpp"

using namespace bsvi;

TEST_CASE("counter hash is a pure function and separates lanes") {
    CHECK(rng::counter_hash(1, 2, 3, 4, 5) == rng::counter_hash(1, 2, 3, 4, 5));
    std::set<std::uint64_t> seen;
    for (std::uint64_t lane = 0; lane < 100; ++lane)
        seen.insert(rng::counter_hash(1, 2, 3, 4, lane));
    CHECK(seen.size() == 100);
}

TEST_CASE("uniforms live strictly inside (0, 1)") {
    for (std::uint64_t k = 0; k < 10000; ++k) {
        const double u = rng::uniform01(rng::counter_hash(3, 1, k, 0));
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
    CHECK(rng::uniform01(0) > 0.0);
    CHECK(rng::uniform01(~0ULL) < 1.0);
}

TEST_CASE("inverse normal cdf round-trips against erfc") {
    // Phi(x) = erfc(-x / sqrt(2)) / 2, an independent libm oracle.
    for (const double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6}) {
        const double x = rng::inv_normal_cdf(p);
        const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(back == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(rng::inv_normal_cdf(0.5) == 0.0);
    CHECK(rng::inv_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(rng::inv_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
}

TEST_CASE("normal draws match first two moments") {
    const std::size_t n = 100000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = rng::normal(7, 1, k, 0);
        s += x;
        s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("conditional streams avoid the baseline stream") {
    CHECK(rng::conditional_stream(0, 0.0) != rng::kBaselineStream);
    CHECK(rng::conditional_stream(3, 1.5) != rng::conditional_stream(3, 1.5000001));
    CHECK(rng::conditional_stream(3, 1.5) != rng::conditional_stream(4, 1.5));
    CHECK(rng::conditional_stream(3, 1.5) == rng::conditional_stream(3, 1.5));
}
