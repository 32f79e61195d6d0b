#include "bsvi/bsde.hpp"

#include <cmath>
#include <functional>

#include "bsvi/parallel.hpp"
#include "bsvi/rng.hpp"

namespace bsvi {

namespace {

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sd_of(std::span<const double> xs) {
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    const std::size_t n = xs.size();
    return n > 1 ? std::sqrt(s / static_cast<double>(n - 1)) : 0.0;
}

void check_finite(const std::vector<double>& row, std::size_t m, const char* what) {
    for (std::size_t i = 0; i < row.size(); ++i)
        if (!std::isfinite(row[i]))
            throw DivergedError(std::string(what) + ": non-finite value at node m=" +
                                std::to_string(m) + ", sample i=" + std::to_string(i));
}

// One implicit-penalty / prox update, shared by both stages.
struct PenaltyStep {
    const ConvexObstacle& phi;
    const SchemeParams& params;
    double h;

    void apply(double arg, double& y, double& u) const {
        if (params.scheme == PenaltyScheme::PenalizedImplicit) {
            y = phi.implicit_penalty_step(params.eps, h, arg);
            u = phi.yosida_grad(params.eps, y);
        } else {
            y = phi.resolvent(h, arg);
            u = (arg - y) / h;
        }
    }
};

// Per-sample driver evaluation with frozen per-step context.
using SampleF = std::function<double(std::size_t i, double y, double z)>;
// make_F(s, ynext) prepares step s (hoisting any slice means) and returns the
// per-sample driver; state/dw address the path family.
using MakeF = std::function<SampleF(std::size_t s, std::span<const double> ynext)>;
using StateFn = std::function<double(std::size_t s, std::size_t i)>;

// Backward LSMC recursion over a family of sample paths. Row s = 0 is the
// solve's start node (grid node t_start + s).
BackwardSolution backward_recursion(std::size_t rows, std::size_t nsamples, const TimeGrid& grid,
                                    std::size_t t_start, const ConvexObstacle& phi,
                                    const SchemeParams& params, std::vector<double> terminal,
                                    const StateFn& state, const StateFn& dw, const MakeF& make_F) {
    params.validate();
    const double h = grid.h();
    const PenaltyStep pen{phi, params, h};

    BackwardSolution sol;
    sol.t_start = t_start;
    sol.grid = grid;
    sol.Y.assign(rows, std::vector<double>(nsamples, 0.0));
    sol.Z.assign(rows, std::vector<double>(nsamples, 0.0));
    sol.U.assign(rows, std::vector<double>(nsamples, 0.0));

    sol.Y[rows - 1] = std::move(terminal);
    check_finite(sol.Y[rows - 1], rows - 1, "backward_recursion(terminal)");
    if (params.scheme == PenaltyScheme::PenalizedImplicit) {
        auto& um = sol.U[rows - 1];
        const auto& ym = sol.Y[rows - 1];
        parallel_for(0, nsamples,
                     [&](std::size_t i) { um[i] = phi.yosida_grad(params.eps, ym[i]); });
    }

    std::vector<double> states(nsamples), ztargets(nsamples);
    for (std::size_t s = rows - 1; s-- > 0;) {
        const auto& ynext = sol.Y[s + 1];
        for (std::size_t i = 0; i < nsamples; ++i) {
            states[i] = state(s, i);
            ztargets[i] = ynext[i] * dw(s, i) / h;
        }
        const PolyPredictor zfit = regress_condexp(states, ztargets, params.basis_degree,
                                                   params.ridge, params.extra_basis);
        const PolyPredictor yfit = regress_condexp(states, ynext, params.basis_degree,
                                                   params.ridge, params.extra_basis);
        const SampleF F = make_F(s, ynext);

        auto& yrow = sol.Y[s];
        auto& zrow = sol.Z[s];
        auto& urow = sol.U[s];
        parallel_for(0, nsamples, [&](std::size_t i) {
            const double z = zfit(states[i]);
            const double ey = yfit(states[i]);
            const double arg = ey + h * F(i, ey, z);
            zrow[i] = z;
            pen.apply(arg, yrow[i], urow[i]);
        });
        check_finite(yrow, s, "backward_recursion");
    }

    if (rows == 1) {
        sol.y0 = mean_of(sol.Y[0]);
        sol.y0_stderr = 0.0;
    } else {
        // All start-node states coincide, so Y_0 is constant across samples.
        sol.y0 = sol.Y[0][0];
        sol.y0_stderr = sd_of(sol.Y[1]) / std::sqrt(static_cast<double>(nsamples));
    }
    return sol;
}

std::vector<double> terminal_over(const BaselineLaw& law, const DriverModel& driver,
                                  std::span<const double> states) {
    const auto xT = law.slice(law.grid().M);
    std::vector<double> term(states.size());
    if (driver.h_mean_affine) {
        const double mx = mean_of(xT);
        parallel_for(0, states.size(),
                     [&](std::size_t i) { term[i] = driver.h(mx, states[i]); });
    } else {
        parallel_for(0, states.size(), [&](std::size_t i) {
            double s = 0.0;
            for (double xp : xT) s += driver.h(xp, states[i]);
            term[i] = s / static_cast<double>(xT.size());
        });
    }
    return term;
}

}  // namespace

std::function<double(double)> terminal_basis(const BaselineLaw& law, const DriverModel& driver) {
    const auto xT = law.slice(law.grid().M);
    if (driver.h_mean_affine) {
        const double mx = mean_of(xT);
        return [h = driver.h, mx](double x) { return h(mx, x); };
    }
    return [h = driver.h, xs = std::vector<double>(xT.begin(), xT.end())](double x) {
        double s = 0.0;
        for (double xp : xs) s += h(xp, x);
        return s / static_cast<double>(xs.size());
    };
}

BackwardSolution solve_baseline_bsde(const BaselineLaw& law, const CoefficientModel& model,
                                     const DriverModel& driver, const ConvexObstacle& phi,
                                     const SchemeParams& params) {
    (void)model;  // the forward coefficients are already baked into the cloud
    spot_check_driver(driver, law.cloud().seed);
    const TimeGrid& grid = law.grid();
    const std::size_t N = law.particles();
    const auto& cloud = law.cloud();

    std::vector<double> terminal = terminal_over(law, driver, law.slice(grid.M));

    const MakeF make_F = [&](std::size_t m, std::span<const double> ynext) -> SampleF {
        const double t = grid.node(m);
        const auto xs = law.slice(m);
        if (driver.mean_affine) {
            // Primed slots enter affinely, so averaging the arguments is exact.
            const double mx = mean_of(xs);
            const double my = mean_of(ynext);
            return [&, t, mx, my, m](std::size_t i, double y, double z) {
                return driver.f(t, mx, cloud.X[m][i], my, y, z);
            };
        }
        return [&, t, m, ynext](std::size_t i, double y, double z) {
            double s = 0.0;
            const auto xrow = law.slice(m);
            for (std::size_t j = 0; j < xrow.size(); ++j)
                s += driver.f(t, xrow[j], cloud.X[m][i], ynext[j], y, z);
            return s / static_cast<double>(xrow.size());
        };
    };

    return backward_recursion(
        grid.M + 1, N, grid, 0, phi, params, std::move(terminal),
        [&](std::size_t m, std::size_t i) { return cloud.X[m][i]; },
        [&](std::size_t m, std::size_t i) { return cloud.dW[m][i]; }, make_F);
}

BackwardSolution solve_conditional_bsde(const BaselineLaw& law, const BackwardSolution& baseline,
                                        const CoefficientModel& model, const DriverModel& driver,
                                        const ConvexObstacle& phi, std::size_t t_start, double x,
                                        std::size_t K, const SchemeParams& params,
                                        std::uint64_t seed) {
    const TimeGrid& grid = law.grid();
    if (baseline.Y.size() != grid.M + 1 || baseline.Y[0].size() != law.particles())
        throw ConfigError("solve_conditional_bsde: baseline solution does not match the law");
    if (t_start >= grid.M)
        throw ConfigError("solve_conditional_bsde: t_start must be < M");

    const ConditionalPaths paths = simulate_conditional(law, model, t_start, x, K, seed);
    const std::size_t rows = grid.M - t_start + 1;

    std::vector<double> last_states(K);
    for (std::size_t p = 0; p < K; ++p) last_states[p] = paths.X[p][rows - 1];
    std::vector<double> terminal = terminal_over(law, driver, last_states);

    // ftilde(s, x, y, z) = (1/N) sum_j f(s, X_s^j, x, Y_s+1^{baseline,j}, y, z),
    // mirroring the stage-1 recursion's use of the next-step baseline Y.
    const MakeF make_F = [&](std::size_t s, std::span<const double>) -> SampleF {
        const std::size_t m = t_start + s;
        const double t = grid.node(m);
        const auto xs = law.slice(m);
        const auto& ybase = baseline.Y[m + 1];
        if (driver.mean_affine) {
            const double mx = mean_of(xs);
            const double my = mean_of(ybase);
            return [&, t, mx, my, s](std::size_t p, double y, double z) {
                return driver.f(t, mx, paths.X[p][s], my, y, z);
            };
        }
        return [&, t, s](std::size_t p, double y, double z) {
            double acc = 0.0;
            const auto xrow = law.slice(t_start + s);
            const auto& yb = baseline.Y[t_start + s + 1];
            for (std::size_t j = 0; j < xrow.size(); ++j)
                acc += driver.f(t, xrow[j], paths.X[p][s], yb[j], y, z);
            return acc / static_cast<double>(xrow.size());
        };
    };

    return backward_recursion(
        rows, K, grid, t_start, phi, params, std::move(terminal),
        [&](std::size_t s, std::size_t p) { return paths.X[p][s]; },
        [&](std::size_t s, std::size_t p) { return paths.dW[p][s]; }, make_F);
}

UField build_u_field(const BaselineLaw& law, const BackwardSolution& baseline,
                     const CoefficientModel& model, const DriverModel& driver,
                     const ConvexObstacle& phi, const std::vector<std::size_t>& t_nodes,
                     const std::vector<double>& x_nodes, std::size_t K,
                     const SchemeParams& params, std::uint64_t seed) {
    UField field;
    for (std::size_t t_idx : t_nodes) {
        for (double x : x_nodes) {
            UFieldNode node;
            node.t_index = t_idx;
            node.x = x;
            try {
                if (t_idx == law.grid().M) {
                    // Terminal row: u(T, x) = htilde(x) with no MC error.
                    const double xv = x;
                    node.u = terminal_over(law, driver, std::span<const double>(&xv, 1))[0];
                    node.stderr_ = 0.0;
                } else {
                    const BackwardSolution sol = solve_conditional_bsde(
                        law, baseline, model, driver, phi, t_idx, x, K, params, seed);
                    node.u = sol.y0;
                    node.stderr_ = sol.y0_stderr;
                }
                node.ok = true;
            } catch (const Error& e) {
                node.ok = false;
                node.error = e.what();
            }
            field.nodes.push_back(std::move(node));
        }
    }
    return field;
}

ComparisonReport comparison_harness(const BaselineLaw& law, const CoefficientModel& model,
                                    const DriverModel& driver1, const DriverModel& driver2,
                                    const SchemeParams& params) {
    if (!driver1.monotone_in_yprime && !driver2.monotone_in_yprime)
        throw ConfigError(
            "comparison_harness: one driver must declare monotone_in_yprime ((H6)(v))");

    // The comparison lemma is stated for the mean-field BSDE without obstacle.
    const ConvexObstacle none = ConvexObstacle::zero();
    const BackwardSolution s1 = solve_baseline_bsde(law, model, driver1, none, params);
    const BackwardSolution s2 = solve_baseline_bsde(law, model, driver2, none, params);

    ComparisonReport rep;
    std::vector<double> delta(law.particles());
    for (std::size_t m = 0; m < s1.Y.size(); ++m) {
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = s1.Y[m][i] - s2.Y[m][i];
        const double sigma = sd_of(delta);
        for (double d : delta) {
            ++rep.checked;
            const double slack = d + 3.0 * sigma;
            if (slack < -1e-12) {
                ++rep.violations;
                rep.worst_gap = std::min(rep.worst_gap, slack);
            }
        }
    }
    rep.pass = rep.violation_fraction() <= 0.01;
    return rep;
}

}  // namespace bsvi
