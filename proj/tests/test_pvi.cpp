#include <doctest.h>

#include <cmath>

#include "bsvi/config.hpp"
#include "bsvi/pvi.hpp"

using namespace bsvi;

TEST_CASE("heat benchmark is exact at interior nodes") {
    // u = x^2 + (T - t) solves u_t + u_xx/2 = 0 and the implicit scheme is
    // exact for quadratics; the extrapolation boundary layer stays outside
    // the probe margin on a wide box.
    const auto model = make_coefficient_model("brownian", {});
    const auto driver = make_driver_model("heat_square", {});
    const TimeGrid tg(1.0, 20);
    const SpaceGrid xg(-10.0, 10.0, 99);
    const BaselineLaw law = simulate_baseline(model, 0.0, tg, 500, 3);
    const FieldSolution f = solve_pvi(law, model, driver, ConvexObstacle::zero(), tg, xg, 1e-2,
                                      PviForm::Penalized, 1.0);
    for (std::size_t m = 0; m <= 20; ++m) {
        const double t = tg.node(m);
        for (std::size_t j = 0; j < xg.total_nodes(); ++j) {
            const double x = xg.node(j);
            if (std::fabs(x) > 2.0) continue;
            CHECK(f.values[m][j] == doctest::Approx(x * x + (1.0 - t)).epsilon(1e-8));
        }
    }
}

TEST_CASE("penalty keeps the field near the feasible set") {
    // f = 0, terminal = x (negative half is infeasible), phi = I_[0, inf)
    const auto model = make_coefficient_model("brownian", {});
    DriverModel driver = make_driver_model("bachelier", {});
    driver.h = [](double, double x) { return std::max(x, 0.0); };
    const TimeGrid tg(0.5, 20);
    const SpaceGrid xg(-6.0, 6.0, 59);
    const BaselineLaw law = simulate_baseline(model, 0.0, tg, 500, 5);
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf());
    const FieldSolution pen = solve_pvi(law, model, driver, phi, tg, xg, 1e-3,
                                        PviForm::Penalized, 1.0);
    const FieldSolution prox = solve_pvi(law, model, driver, phi, tg, xg, 1e-3,
                                         PviForm::Prox, 1.0);
    for (std::size_t j = 0; j < xg.total_nodes(); ++j) {
        CHECK(pen.values[0][j] > -0.05);
        CHECK(prox.values[0][j] >= 0.0);
    }
}

TEST_CASE("terminal data outside the obstacle domain is rejected") {
    const auto model = make_coefficient_model("brownian", {});
    const auto driver = make_driver_model("heat_square", {});  // x^2 up to 36
    const TimeGrid tg(1.0, 10);
    const SpaceGrid xg(-6.0, 6.0, 20);
    const BaselineLaw law = simulate_baseline(model, 0.0, tg, 200, 7);
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal(0.5));
    CHECK_THROWS_AS(terminal_condition(law, driver, xg, phi), InfeasibleTerminalError);
}

TEST_CASE("field interpolation is linear between nodes") {
    FieldSolution f;
    f.tgrid = TimeGrid(1.0, 2);
    f.xgrid = SpaceGrid(0.0, 3.0, 8);  // hold dx nodes at k/3
    f.values.assign(3, std::vector<double>(10, 0.0));
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t j = 0; j < 10; ++j)
            f.values[m][j] = static_cast<double>(m) + f.xgrid.node(j);
    const double mid = field_value(f, 0.25, 1.0);
    CHECK(mid == doctest::Approx(0.5 + 1.0).epsilon(1e-12));
    // clamped outside the box
    CHECK(field_value(f, 0.0, -5.0) == doctest::Approx(f.values[0][0]).epsilon(1e-12));
}

TEST_CASE("probe error report tracks sup and l2") {
    FieldSolution a, b;
    a.tgrid = b.tgrid = TimeGrid(1.0, 1);
    a.xgrid = b.xgrid = SpaceGrid(-1.0, 1.0, 8);
    a.values.assign(2, std::vector<double>(10, 1.0));
    b.values.assign(2, std::vector<double>(10, 1.25));
    const auto rep = field_error(a, b, {{0.5, 0.0}, {0.5, 0.3}});
    CHECK(rep.sup_err == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.l2_err == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.table.size() == 2);
}
