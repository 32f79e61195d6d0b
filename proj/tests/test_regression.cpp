#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsvi/errors.hpp"
#include "bsvi/regression.hpp"
#include "bsvi/rng.hpp"

using namespace bsvi;

namespace {

std::vector<double> uniforms(std::size_t n, double lo, double hi, std::uint64_t seed) {
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k)
        xs[k] = lo + (hi - lo) * rng::uniform01(rng::counter_hash(seed, 1, k, 0));
    return xs;
}

}  // namespace

TEST_CASE("polynomial targets are recovered exactly") {
    const auto xs = uniforms(500, -2.0, 3.0, 11);
    std::vector<double> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k)
        ys[k] = 1.0 - 0.5 * xs[k] + 0.25 * xs[k] * xs[k] * xs[k];
    const PolyPredictor fit = regress_condexp(xs, ys, 3, 0.0);
    for (const double x : {-1.9, 0.0, 0.7, 2.8})
        CHECK(fit(x) == doctest::Approx(1.0 - 0.5 * x + 0.25 * x * x * x).epsilon(1e-9));
}

TEST_CASE("noisy linear target regresses to the mean line") {
    const std::size_t n = 50000;
    const auto xs = uniforms(n, -1.0, 1.0, 13);
    std::vector<double> ys(n);
    for (std::size_t k = 0; k < n; ++k)
        ys[k] = 2.0 * xs[k] + 0.5 + 0.3 * rng::normal(13, 2, k, 0);
    const PolyPredictor fit = regress_condexp(xs, ys, 1, 0.0);
    CHECK(fit(0.0) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(fit(1.0) - fit(-1.0) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("constant state falls back to the plain mean") {
    const std::vector<double> xs(40, 1.7);
    std::vector<double> ys(40);
    for (std::size_t k = 0; k < 40; ++k) ys[k] = static_cast<double>(k);
    const PolyPredictor fit = regress_condexp(xs, ys, 3, 0.0);
    CHECK(fit(1.7) == doctest::Approx(19.5).epsilon(1e-12));
    CHECK(fit(-4.0) == doctest::Approx(19.5).epsilon(1e-12));
}

TEST_CASE("rank deficiency without ridge is reported, with ridge is not") {
    // Two distinct state values cannot identify a cubic.
    std::vector<double> xs(40), ys(40);
    for (std::size_t k = 0; k < 40; ++k) {
        xs[k] = k % 2 == 0 ? 0.0 : 1.0;
        ys[k] = xs[k];
    }
    CHECK_THROWS_AS(regress_condexp(xs, ys, 3, 0.0), DegenerateRegressionError);
    const PolyPredictor fit = regress_condexp(xs, ys, 3, 1e-8);
    CHECK(fit(1.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sample count must exceed the basis size") {
    std::vector<double> xs{0.0, 1.0, 2.0, 3.0}, ys{0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_AS(regress_condexp(xs, ys, 3, 0.0), ConfigError);
}

TEST_CASE("an extra hinge feature absorbs a kinked target") {
    const auto xs = uniforms(2000, -2.0, 2.0, 17);
    std::vector<double> ys(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) ys[k] = std::max(xs[k], 0.0);
    const auto hinge = [](double x) { return std::max(x, 0.0); };
    const PolyPredictor plain = regress_condexp(xs, ys, 3, 0.0);
    const PolyPredictor aug = regress_condexp(xs, ys, 3, 0.0, hinge);
    double werr_plain = 0.0, werr_aug = 0.0;
    for (const double x : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
        werr_plain = std::max(werr_plain, std::fabs(plain(x) - hinge(x)));
        werr_aug = std::max(werr_aug, std::fabs(aug(x) - hinge(x)));
    }
    CHECK(werr_aug < 1e-8);
    CHECK(werr_plain > 1e-2);
}
