#include <doctest.h>

#include <cmath>

#include "bsvi/config.hpp"
#include "bsvi/mkv.hpp"

using namespace bsvi;

namespace {

CoefficientModel brownian() { return make_coefficient_model("brownian", {}); }

}  // namespace

TEST_CASE("baseline brownian cloud matches exact moments") {
    const TimeGrid grid(1.0, 20);
    const std::size_t N = 20000;
    const BaselineLaw law = simulate_baseline(brownian(), 0.0, grid, N, 123);
    const auto xT = law.slice(grid.M);
    double s = 0.0, s2 = 0.0;
    for (double x : xT) {
        s += x;
        s2 += x * x;
    }
    const double mean = s / N, var = s2 / N - mean * mean;
    // X_T ~ N(0, T); 3 sigma Monte Carlo bands
    CHECK(std::fabs(mean) < 3.0 / std::sqrt(static_cast<double>(N)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
    CHECK(moment_check(law.cloud(), 2.0) > 0.5);
    CHECK(moment_check(law.cloud(), 2.0) < 10.0);
}

TEST_CASE("same seed reproduces the cloud exactly") {
    const TimeGrid grid(1.0, 10);
    const BaselineLaw a = simulate_baseline(brownian(), 0.3, grid, 500, 9);
    const BaselineLaw b = simulate_baseline(brownian(), 0.3, grid, 9, 9);  // different N
    const BaselineLaw c = simulate_baseline(brownian(), 0.3, grid, 500, 9);
    CHECK(a.cloud().X == c.cloud().X);
    CHECK(a.cloud().dW == c.cloud().dW);
    // common particles agree across N: draws are indexed, not sequential
    for (std::size_t m = 0; m <= 10; ++m)
        for (std::size_t i = 0; i < 9; ++i) CHECK(a.cloud().X[m][i] == b.cloud().X[m][i]);
}

TEST_CASE("affine fast path equals the quadratic-cost average") {
    CoefficientModel fast = make_coefficient_model("mean_revert_to_cloud",
                                                   {{"kappa", 0.4}, {"sigma", 0.3}});
    CoefficientModel slow = fast;
    slow.mean_affine = false;  // force the O(N^2) interacting average
    const TimeGrid grid(1.0, 10);
    const BaselineLaw a = simulate_baseline(fast, 0.1, grid, 300, 77);
    const BaselineLaw b = simulate_baseline(slow, 0.1, grid, 300, 77);
    for (std::size_t m = 0; m <= 10; ++m)
        for (std::size_t i = 0; i < 300; ++i)
            CHECK(a.cloud().X[m][i] == doctest::Approx(b.cloud().X[m][i]).epsilon(1e-10));
}

TEST_CASE("mean reversion to the cloud keeps the mean near x0") {
    CoefficientModel model = make_coefficient_model("mean_revert_to_cloud",
                                                    {{"kappa", 0.25}, {"sigma", 0.5}});
    const TimeGrid grid(1.0, 50);
    const BaselineLaw law = simulate_baseline(model, 0.0, grid, 10000, 5);
    // d/dt E[X] = kappa (E[X] - E[X]) = 0
    CHECK(std::fabs(law.slice_mean(50)) < 0.02);
}

TEST_CASE("mean_coeffs averages over the slice") {
    CoefficientModel model = make_coefficient_model("mean_revert_to_cloud",
                                                    {{"kappa", 0.5}, {"sigma", 0.2}});
    const TimeGrid grid(1.0, 4);
    const BaselineLaw law = simulate_baseline(model, 0.0, grid, 200, 4);
    const MeanCoeffs mc = mean_coeffs(law, model, 2, 1.5);
    CHECK(mc.b == doctest::Approx(0.5 * (law.slice_mean(2) - 1.5)).epsilon(1e-12));
    CHECK(mc.sigma == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("conditional paths start at x and reuse nothing from the baseline") {
    const TimeGrid grid(1.0, 10);
    const BaselineLaw law = simulate_baseline(brownian(), 0.0, grid, 200, 21);
    const ConditionalPaths p = simulate_conditional(law, brownian(), 3, 1.7, 50, 21);
    CHECK(p.X.size() == 50);
    CHECK(p.X[0].size() == 8);  // nodes 3..10
    for (std::size_t k = 0; k < 50; ++k) CHECK(p.X[k][0] == 1.7);
    // disjoint stream: increments differ from the baseline's
    CHECK(p.dW[0][0] != law.cloud().dW[3][0]);
    const ConditionalPaths q = simulate_conditional(law, brownian(), 3, 1.7, 50, 21);
    CHECK(p.X == q.X);
}

TEST_CASE("NaN blowups are reported with their location") {
    CoefficientModel bad;
    bad.name = "bad";
    bad.drift = [](double, double, double) { return std::nan(""); };
    bad.diffusion = [](double, double, double) { return 1.0; };
    bad.mean_affine = true;
    const TimeGrid grid(1.0, 5);
    CHECK_THROWS_AS(simulate_baseline(bad, 1.0, grid, 10, 2), DivergedError);
}
