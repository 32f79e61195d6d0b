#include <doctest.h>

#include <cmath>

#include "bsvi/config.hpp"
#include "bsvi/experiments.hpp"

using namespace bsvi;
using nlohmann::json;

TEST_CASE("convergence study needs at least three epsilons") {
    RunConfig c = config_from_json(json{
        {"preset", "CF1"}, {"seed", 1}, {"scheme", json{{"eps_list", {0.1, 0.05}}}}});
    CHECK_THROWS_AS(run_convergence_epsilon(c), ConfigError);
}

TEST_CASE("zero obstacle leaves the penalty inert") {
    RunConfig c = config_from_json(json{{"preset", "CF1"},
                                        {"seed", 3},
                                        {"grids", json{{"M", 10}, {"N", 300}}},
                                        {"scheme", json{{"eps_list", {0.1, 0.03, 0.01}}}}});
    const ConvergenceResult res = run_convergence_epsilon(c);
    REQUIRE(res.rows.size() == 3);
    for (const auto& row : res.rows) CHECK(row.dist <= 1e-10);
    CHECK_FALSE(res.applicable);
    CHECK(!res.note.empty());
}

TEST_CASE("probe layout snaps times to nodes and spaces x inside the margin") {
    RunConfig c = config_from_json(json{{"preset", "HEAT"},
                                        {"seed", 1},
                                        {"grids", json{{"M", 10}, {"J", 19}}},
                                        {"probes", json{{"t", {0.5, 1.0}}, {"x_count", 11}}}});
    const auto tidx = probe_t_indices(c);
    REQUIRE(tidx.size() == 2);
    CHECK(tidx[0] == 5);
    CHECK(tidx[1] == 10);
    const auto xs = probe_x_values(c);
    REQUIRE(xs.size() == 11);
    // box is [-10, 10], margin [-6, 6], 11 values -> the integers -5..5,
    // which also land exactly on the J = 19 grid (dx = 1)
    for (int k = 0; k < 11; ++k) CHECK(xs[k] == doctest::Approx(k - 5.0).epsilon(1e-14));
    RunConfig bad = c;
    bad.probe_times = {2.0};
    CHECK_THROWS_AS(probe_t_indices(bad), ConfigError);
}

TEST_CASE("compare run is exact at the terminal probes") {
    // probes sit on grid nodes and both solvers evaluate the same terminal
    // map there, so the terminal rows agree to the last bit
    RunConfig c = config_from_json(
        json{{"preset", "HEAT"},
             {"seed", 11},
             {"grids", json{{"M", 10}, {"N", 300}, {"K", 500}, {"J", 19}}},
             {"probes", json{{"t", {0.5, 1.0}}, {"x_count", 11}}}});
    const CompareResult res = run_compare(c);
    REQUIRE(res.table.size() == 22);
    for (const ProbeRow& row : res.table) {
        CHECK(row.ok);
        if (row.t == 1.0) {
            CHECK(row.u_pde == doctest::Approx(row.x * row.x).epsilon(1e-12));
            CHECK(row.err <= 1e-12);
        }
    }
    CHECK(std::isfinite(res.sup_err));
    CHECK(res.l2_err <= res.sup_err);
}
