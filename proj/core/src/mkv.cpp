#include "bsvi/mkv.hpp"

#include <cmath>
#include <string>

#include "bsvi/errors.hpp"
#include "bsvi/parallel.hpp"
#include "bsvi/rng.hpp"

namespace bsvi {

namespace {

[[noreturn]] void throw_diverged(const char* what, std::size_t m, std::size_t i) {
    throw DivergedError(std::string(what) + ": non-finite state at step m=" + std::to_string(m) +
                        ", path i=" + std::to_string(i));
}

double slice_mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace

double BaselineLaw::slice_mean(std::size_t m) const { return slice_mean_of(slice(m)); }

void spot_check_lipschitz(const CoefficientModel& model, std::uint64_t seed, int samples) {
    if (!model.lipschitz_k) return;
    const double k = *model.lipschitz_k;
    for (int s = 0; s < samples; ++s) {
        const auto u = [&](std::uint64_t lane) {
            return 20.0 * rng::uniform01(rng::counter_hash(seed, 0xf00d, s, 0, lane)) - 10.0;
        };
        const double t = rng::uniform01(rng::counter_hash(seed, 0xf00d, s, 1, 0));
        const double xp1 = u(1), x1 = u(2), xp2 = u(3), x2 = u(4);
        const double lhs = std::fabs(model.drift(t, xp1, x1) - model.drift(t, xp2, x2)) +
                           std::fabs(model.diffusion(t, xp1, x1) - model.diffusion(t, xp2, x2));
        const double rhs = k * (std::fabs(xp1 - xp2) + std::fabs(x1 - x2)) * (1.0 + 1e-6);
        if (lhs > rhs + 1e-12)
            throw ConfigError("coefficient model '" + model.name +
                              "': asserted Lipschitz constant violated on sampled pair");
    }
}

void spot_check_driver(const DriverModel& driver, std::uint64_t seed, int samples) {
    for (int s = 0; s < samples; ++s) {
        const auto u = [&](std::uint64_t lane) {
            return 20.0 * rng::uniform01(rng::counter_hash(seed, 0xfeed, s, 0, lane)) - 10.0;
        };
        const double t = rng::uniform01(rng::counter_hash(seed, 0xfeed, s, 1, 0));
        if (driver.lipschitz_c) {
            const double c = *driver.lipschitz_c;
            const double a1 = u(1), a2 = u(2), a3 = u(3), a4 = u(4), a5 = u(5);
            const double b1 = u(6), b2 = u(7), b3 = u(8), b4 = u(9), b5 = u(10);
            const double lhs =
                std::fabs(driver.f(t, a1, a2, a3, a4, a5) - driver.f(t, b1, b2, b3, b4, b5)) +
                std::fabs(driver.h(a1, a2) - driver.h(b1, b2));
            const double rhs = c * (std::fabs(a1 - b1) + std::fabs(a2 - b2) + std::fabs(a3 - b3) +
                                    std::fabs(a4 - b4) + std::fabs(a5 - b5)) * (1.0 + 1e-6);
            if (lhs > rhs + 1e-12)
                throw ConfigError("driver model '" + driver.name +
                                  "': asserted Lipschitz constant violated on sampled pair");
        }
        if (driver.monotone_in_yprime) {
            const double xp = u(11), x = u(12), y = u(13), z = u(14);
            const double y1 = u(15), y2 = u(16);
            const double lo = std::min(y1, y2), hi = std::max(y1, y2);
            if (driver.f(t, xp, x, hi, y, z) < driver.f(t, xp, x, lo, y, z) - 1e-12)
                throw ConfigError("driver model '" + driver.name +
                                  "': declared nondecreasing in y' but sampled decrease found");
        }
    }
}

BaselineLaw simulate_baseline(const CoefficientModel& model, double x0, const TimeGrid& grid,
                              std::size_t N, std::uint64_t seed) {
    if (N < 2) throw ConfigError("simulate_baseline: need N >= 2");
    spot_check_lipschitz(model, seed);

    ParticleCloud cloud;
    cloud.grid = grid;
    cloud.N = N;
    cloud.seed = seed;
    cloud.stream = rng::kBaselineStream;
    cloud.X.assign(grid.M + 1, std::vector<double>(N, x0));
    cloud.dW.assign(grid.M, std::vector<double>(N, 0.0));

    const double h = grid.h();
    const double sqh = std::sqrt(h);
    for (std::size_t m = 0; m < grid.M; ++m) {
        const double t = grid.node(m);
        const auto& cur = cloud.X[m];
        auto& inc = cloud.dW[m];
        auto& nxt = cloud.X[m + 1];
        const double mean_x = model.mean_affine ? slice_mean_of(cur) : 0.0;
        parallel_for(0, N, [&](std::size_t i) {
            double bbar, sbar;
            if (model.mean_affine) {
                bbar = model.drift(t, mean_x, cur[i]);
                sbar = model.diffusion(t, mean_x, cur[i]);
            } else {
                double sb = 0.0, ss = 0.0;
                for (std::size_t j = 0; j < N; ++j) {
                    sb += model.drift(t, cur[j], cur[i]);
                    ss += model.diffusion(t, cur[j], cur[i]);
                }
                bbar = sb / static_cast<double>(N);
                sbar = ss / static_cast<double>(N);
            }
            inc[i] = sqh * rng::normal(seed, rng::kBaselineStream, m, i);
            nxt[i] = cur[i] + bbar * h + sbar * inc[i];
        });
        for (std::size_t i = 0; i < N; ++i)
            if (!std::isfinite(nxt[i])) throw_diverged("simulate_baseline", m + 1, i);
    }
    return BaselineLaw(std::move(cloud));
}

MeanCoeffs mean_coeffs(const BaselineLaw& law, const CoefficientModel& model,
                       std::size_t t_index, double x) {
    if (t_index > law.grid().M) throw ConfigError("mean_coeffs: t_index outside grid");
    const double t = law.grid().node(t_index);
    const auto xs = law.slice(t_index);
    if (model.mean_affine) {
        const double mx = slice_mean_of(xs);
        return {model.drift(t, mx, x), model.diffusion(t, mx, x)};
    }
    double sb = 0.0, ss = 0.0;
    for (double xp : xs) {
        sb += model.drift(t, xp, x);
        ss += model.diffusion(t, xp, x);
    }
    const double n = static_cast<double>(xs.size());
    return {sb / n, ss / n};
}

ConditionalPaths simulate_conditional(const BaselineLaw& law, const CoefficientModel& model,
                                      std::size_t t_start, double x, std::size_t K,
                                      std::uint64_t seed) {
    const TimeGrid& grid = law.grid();
    if (t_start >= grid.M) throw ConfigError("simulate_conditional: t_start must be < M");
    if (K < 1) throw ConfigError("simulate_conditional: need K >= 1");

    ConditionalPaths paths;
    paths.t_start = t_start;
    paths.x = x;
    paths.grid = grid;
    const std::size_t steps = grid.M - t_start;
    paths.X.assign(K, std::vector<double>(steps + 1, x));
    paths.dW.assign(K, std::vector<double>(steps, 0.0));

    const double h = grid.h();
    const double sqh = std::sqrt(h);
    const std::uint64_t stream = rng::conditional_stream(t_start, x);

    // Paths do not interact; for affine models the per-step slice mean is
    // hoisted so each path step is O(1) instead of O(N).
    std::vector<double> slice_means;
    if (model.mean_affine) {
        slice_means.resize(steps);
        for (std::size_t s = 0; s < steps; ++s) slice_means[s] = law.slice_mean(t_start + s);
    }
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t m = t_start + s;
        const double t = grid.node(m);
        parallel_for(0, K, [&](std::size_t p) {
            double bbar, sbar;
            if (model.mean_affine) {
                bbar = model.drift(t, slice_means[s], paths.X[p][s]);
                sbar = model.diffusion(t, slice_means[s], paths.X[p][s]);
            } else {
                const auto mc = mean_coeffs(law, model, m, paths.X[p][s]);
                bbar = mc.b;
                sbar = mc.sigma;
            }
            const double dw = sqh * rng::normal(seed, stream, m, p);
            paths.dW[p][s] = dw;
            paths.X[p][s + 1] = paths.X[p][s] + bbar * h + sbar * dw;
        });
        for (std::size_t p = 0; p < K; ++p)
            if (!std::isfinite(paths.X[p][s + 1])) throw_diverged("simulate_conditional", m + 1, p);
    }
    return paths;
}

double moment_check(const ParticleCloud& cloud, double p) {
    if (!(p >= 2.0)) throw ConfigError("moment_check: need p >= 2");
    double acc = 0.0;
    for (std::size_t i = 0; i < cloud.N; ++i) {
        double sup = 0.0;
        for (std::size_t m = 0; m <= cloud.grid.M; ++m)
            sup = std::max(sup, std::fabs(cloud.X[m][i]));
        acc += std::pow(sup, p);
    }
    return acc / static_cast<double>(cloud.N);
}

}  // namespace bsvi
