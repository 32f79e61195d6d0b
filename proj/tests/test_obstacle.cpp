#include <doctest.h>

#include <cmath>

#include "bsvi/obstacle.hpp"
#include "bsvi/rng.hpp"

using namespace bsvi;

TEST_CASE("zero obstacle is inert") {
    const auto phi = ConvexObstacle::zero();
    CHECK(phi.eval(3.7).value() == 0.0);
    CHECK(phi.resolvent(0.2, -1.3) == -1.3);
    CHECK(phi.moreau_env(0.2, -1.3) == 0.0);
    CHECK(phi.yosida_grad(0.2, -1.3) == 0.0);
    CHECK(phi.implicit_penalty_step(0.2, 0.05, 4.2) == 4.2);
}

TEST_CASE("half-line indicator closed forms") {
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf());
    CHECK(phi.eval(-0.5).is_pos_inf());
    CHECK(phi.eval(0.0).value() == 0.0);
    CHECK(phi.resolvent(0.1, -2.0) == 0.0);
    CHECK(phi.resolvent(0.1, 2.0) == 2.0);
    // phi_eps(u) = u^2/(2 eps) below the domain
    CHECK(phi.moreau_env(0.1, -2.0) == doctest::Approx(4.0 / 0.2).epsilon(1e-12));
    CHECK(phi.yosida_grad(0.1, -2.0) == doctest::Approx(-20.0).epsilon(1e-12));
    // subdifferential: (-inf, 0] at the corner, {0} inside, empty outside
    const auto at0 = phi.subdiff_interval(0.0);
    CHECK(at0.lo.is_neg_inf());
    CHECK(at0.hi.value() == 0.0);
    CHECK(at0.contains(-5.0));
    const auto inside = phi.subdiff_interval(1.0);
    CHECK(inside.lo.value() == 0.0);
    CHECK(inside.hi.value() == 0.0);
    CHECK(phi.subdiff_interval(-1.0).empty);
}

TEST_CASE("bounded indicator clamps") {
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(-1.0), ExtReal(2.0));
    CHECK(phi.resolvent(0.5, -3.0) == -1.0);
    CHECK(phi.resolvent(0.5, 5.0) == 2.0);
    CHECK(phi.resolvent(0.5, 0.3) == 0.3);
    CHECK(phi.moreau_env(0.5, 5.0) == doctest::Approx(9.0 / 1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ConvexObstacle::indicator_interval(ExtReal(1.0), ExtReal(2.0)),
                    InvalidObstacleError);  // 0 outside the interval
}

TEST_CASE("quadratic closed forms") {
    const double c = 0.7, eps = 0.3, u = 1.9;
    const auto phi = ConvexObstacle::quadratic(c);
    CHECK(phi.eval(u).value() == doctest::Approx(0.5 * c * u * u).epsilon(1e-14));
    CHECK(phi.resolvent(eps, u) == doctest::Approx(u / (1.0 + eps * c)).epsilon(1e-14));
    CHECK(phi.moreau_env(eps, u) ==
          doctest::Approx(0.5 * c * u * u / (1.0 + eps * c)).epsilon(1e-12));
    CHECK(phi.yosida_grad(eps, u) ==
          doctest::Approx(c * u / (1.0 + eps * c)).epsilon(1e-12));
}

TEST_CASE("absolute value soft-thresholds") {
    const auto phi = ConvexObstacle::power_abs(1.0);
    CHECK(phi.resolvent(0.3, 1.0) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(phi.resolvent(0.3, -1.0) == doctest::Approx(-0.7).epsilon(1e-14));
    CHECK(phi.resolvent(0.3, 0.2) == 0.0);
    const auto sg = phi.subdiff_interval(0.0);
    CHECK(sg.lo.value() == -1.0);
    CHECK(sg.hi.value() == 1.0);
}

TEST_CASE("fractional power envelope matches grid minimization") {
    const auto phi = ConvexObstacle::power_abs(1.5);
    for (const double u : {-2.3, -0.4, 0.9, 3.1}) {
        for (const double eps : {0.05, 0.4}) {
            double best = 1e300;
            for (double v = -6.0; v <= 6.0; v += 1e-4) {
                const double cand =
                    (u - v) * (u - v) / (2.0 * eps) + std::pow(std::fabs(v), 1.5) / 1.5;
                if (cand < best) best = cand;
            }
            CHECK(phi.moreau_env(eps, u) == doctest::Approx(best).epsilon(1e-6));
        }
    }
}

TEST_CASE("piecewise linear resolvent and validation") {
    const auto phi = ConvexObstacle::piecewise_linear({-1.0, 0.0, 1.0}, {-2.0, -0.5, 0.5, 3.0});
    // interior of a piece: shift by eps * slope
    CHECK(phi.resolvent(0.1, 0.5) == doctest::Approx(0.45).epsilon(1e-12));
    // stuck at the breakpoint while u - eps*subdiff straddles it
    CHECK(phi.resolvent(1.0, 0.3) == 0.0);
    CHECK(phi.eval(0.0).value() == 0.0);
    CHECK(phi.eval(1.0).value() == doctest::Approx(0.5).epsilon(1e-12));
    // slopes must be nondecreasing, and 0 must minimize
    CHECK_THROWS_AS(ConvexObstacle::piecewise_linear({0.0}, {1.0, 0.5}), InvalidObstacleError);
    CHECK_THROWS_AS(ConvexObstacle::piecewise_linear({0.0}, {0.5, 1.0}), InvalidObstacleError);
}

TEST_CASE("custom obstacle normalization is enforced") {
    CHECK_THROWS_AS(ConvexObstacle::custom([](double u) { return u * u + 1.0; },
                                           [](double u) { return 2.0 * u; },
                                           ExtReal::neg_inf(), ExtReal::pos_inf()),
                    InvalidObstacleError);
    CHECK_THROWS_AS(ConvexObstacle::custom([](double u) { return -u * u; },
                                           [](double u) { return -2.0 * u; },
                                           ExtReal::neg_inf(), ExtReal::pos_inf()),
                    InvalidObstacleError);
}

TEST_CASE("implicit penalty step solves its residual equation") {
    const double eps = 0.02, h = 0.01;
    std::vector<ConvexObstacle> phis;
    phis.push_back(ConvexObstacle::quadratic(1.3));
    phis.push_back(ConvexObstacle::power_abs(1.0));
    phis.push_back(ConvexObstacle::power_abs(1.7));
    phis.push_back(ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf()));
    for (const auto& phi : phis) {
        for (std::size_t k = 0; k < 200; ++k) {
            const double v = -4.0 + 8.0 * rng::uniform01(rng::counter_hash(9, 9, k, 0));
            const double y = phi.implicit_penalty_step(eps, h, v);
            CHECK(y + h * phi.yosida_grad(eps, y) == doctest::Approx(v).epsilon(1e-8));
        }
    }
}
