#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bsvi/bsde.hpp"
#include "bsvi/config.hpp"
#include "bsvi/pvi.hpp"
#include "bsvi/regression.hpp"
#include "bsvi/rng.hpp"

using namespace bsvi;

namespace {

void BM_ResolventClosedForm(benchmark::State& state) {
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf());
    double u = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi.resolvent(0.05, u));
        u = -u;
    }
}
BENCHMARK(BM_ResolventClosedForm);

void BM_ResolventBisection(benchmark::State& state) {
    // piecewise obstacle has no closed form, exercises the numeric path
    const auto phi =
        ConvexObstacle::piecewise_linear({-1.0, 0.0, 1.0}, {-2.0, -0.5, 0.5, 3.0});
    double u = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi.resolvent(0.05, u));
        u = -u;
    }
}
BENCHMARK(BM_ResolventBisection);

void BM_YosidaGrad(benchmark::State& state) {
    const auto phi = ConvexObstacle::power_abs(1.5);
    double u = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi.yosida_grad(0.05, u));
        u = -u;
    }
}
BENCHMARK(BM_YosidaGrad);

void BM_BaselineSimulate(benchmark::State& state) {
    const auto model =
        make_coefficient_model("mean_revert_to_cloud", {{"kappa", 0.25}, {"sigma", 0.5}});
    const TimeGrid grid(1.0, 50);
    const std::size_t N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_baseline(model, 0.0, grid, N, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(N) * 50);
}
BENCHMARK(BM_BaselineSimulate)->Arg(1000)->Arg(10000);

void BM_Regression(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = rng::normal(1, 1, k, 0);
        ys[k] = std::max(xs[k], 0.0) + 0.1 * rng::normal(1, 2, k, 0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(regress_condexp(xs, ys, 3, 1e-8));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Regression)->Arg(1000)->Arg(10000);

void BM_BackwardSolve(benchmark::State& state) {
    const auto model = make_coefficient_model("brownian", {});
    const auto driver = make_driver_model("bachelier", {});
    const auto phi = ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf());
    const std::size_t N = static_cast<std::size_t>(state.range(0));
    const BaselineLaw law = simulate_baseline(model, 0.0, TimeGrid(1.0, 25), N, 1);
    SchemeParams params;
    params.eps = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_baseline_bsde(law, model, driver, phi, params));
    }
}
BENCHMARK(BM_BackwardSolve)->Arg(1000)->Arg(5000);

void BM_PviStep(benchmark::State& state) {
    const auto model = make_coefficient_model("brownian", {});
    const auto driver = make_driver_model("heat_square", {});
    const TimeGrid tg(1.0, 10);
    const SpaceGrid xg(-10.0, 10.0, static_cast<std::size_t>(state.range(0)));
    const BaselineLaw law = simulate_baseline(model, 0.0, tg, 500, 1);
    const std::vector<double> u_next =
        terminal_condition(law, driver, xg, ConvexObstacle::zero());
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_step(law, model, driver, ConvexObstacle::zero(), u_next,
                                               9, xg, 1e-2, 1.0, PviForm::Penalized));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PviStep)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
