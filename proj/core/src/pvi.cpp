#include "bsvi/pvi.hpp"

#include <algorithm>
#include <cmath>

#include "bsvi/parallel.hpp"

namespace bsvi {

namespace {

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double interp_row(const std::vector<double>& row, const SpaceGrid& g, double x) {
    const double dx = g.dx();
    if (x <= g.x_lo) return row.front();
    if (x >= g.x_hi) return row.back();
    const double s = (x - g.x_lo) / dx;
    std::size_t j = static_cast<std::size_t>(s);
    if (j >= row.size() - 1) j = row.size() - 2;
    const double w = s - static_cast<double>(j);
    return (1.0 - w) * row[j] + w * row[j + 1];
}

// Thomas algorithm; a = sub, b = diag, c = super, d = rhs (all length n).
void tridiag_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                   std::vector<double>& d) {
    const std::size_t n = b.size();
    for (std::size_t k = 1; k < n; ++k) {
        const double w = a[k] / b[k - 1];
        b[k] -= w * c[k - 1];
        d[k] -= w * d[k - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) d[k] = (d[k] - c[k] * d[k + 1]) / b[k];
}

}  // namespace

double FieldSolution::interp(std::size_t m, double x) const {
    return interp_row(values[m], xgrid, x);
}

std::vector<double> terminal_condition(const BaselineLaw& law, const DriverModel& driver,
                                       const SpaceGrid& grid, const ConvexObstacle& phi) {
    const auto xT = law.slice(law.grid().M);
    const std::size_t nn = grid.total_nodes();
    std::vector<double> row(nn);
    if (driver.h_mean_affine) {
        const double mx = mean_of(xT);
        parallel_for(0, nn, [&](std::size_t j) { row[j] = driver.h(mx, grid.node(j)); });
    } else {
        parallel_for(0, nn, [&](std::size_t j) {
            double s = 0.0;
            for (double xp : xT) s += driver.h(xp, grid.node(j));
            row[j] = s / static_cast<double>(xT.size());
        });
    }
    constexpr double kDomTol = 1e-8;
    for (std::size_t j = 0; j < nn; ++j) {
        if (!std::isfinite(row[j]))
            throw DivergedError("terminal_condition: non-finite terminal value");
        double dist = 0.0;
        if (phi.domain_lo().is_finite() && row[j] < phi.domain_lo().value())
            dist = phi.domain_lo().value() - row[j];
        if (phi.domain_hi().is_finite() && row[j] > phi.domain_hi().value())
            dist = row[j] - phi.domain_hi().value();
        if (dist > kDomTol)
            throw InfeasibleTerminalError(
                "terminal_condition: terminal value outside Dom(phi) at x = " +
                std::to_string(grid.node(j)) + " ((H3) requires E[phi(xi)] finite)");
    }
    return row;
}

std::vector<double> assemble_step(const BaselineLaw& law, const CoefficientModel& model,
                                  const DriverModel& driver, const ConvexObstacle& phi,
                                  const std::vector<double>& u_next, std::size_t m,
                                  const SpaceGrid& grid, double eps, double theta, PviForm form) {
    if (form == PviForm::Penalized && !(eps > 0.0))
        throw ConfigError("assemble_step: penalized form needs eps > 0");
    const TimeGrid& tg = law.grid();
    const double h = tg.h();
    const double t = tg.node(m);
    const double dx = grid.dx();
    const std::size_t J = grid.J;
    const auto xs = law.slice(m);
    const std::size_t N = xs.size();

    // Empirical coefficients bbar, sigmabar at every node.
    std::vector<double> bbar(J + 2), sbar(J + 2);
    if (model.mean_affine) {
        const double mx = mean_of(xs);
        parallel_for(0, J + 2, [&](std::size_t j) {
            const double x = grid.node(j);
            bbar[j] = model.drift(t, mx, x);
            sbar[j] = model.diffusion(t, mx, x);
        });
    } else {
        parallel_for(0, J + 2, [&](std::size_t j) {
            const double x = grid.node(j);
            double sb = 0.0, ss = 0.0;
            for (double xp : xs) {
                sb += model.drift(t, xp, x);
                ss += model.diffusion(t, xp, x);
            }
            bbar[j] = sb / static_cast<double>(N);
            sbar[j] = ss / static_cast<double>(N);
        });
    }

    // Nonlocal coupling: u_{m+1} along the cloud, interpolated off-grid.
    std::vector<double> u_on_cloud(N);
    parallel_for(0, N, [&](std::size_t i) { u_on_cloud[i] = interp_row(u_next, grid, xs[i]); });
    const double mean_u_cloud = mean_of(u_on_cloud);
    const double mean_x = mean_of(xs);

    const auto du_next = [&](std::size_t j) {
        if (j == 0) return (u_next[1] - u_next[0]) / dx;
        if (j == J + 1) return (u_next[J + 1] - u_next[J]) / dx;
        return (u_next[j + 1] - u_next[j - 1]) / (2.0 * dx);
    };

    std::vector<double> fnl(J + 2);
    parallel_for(0, J + 2, [&](std::size_t j) {
        const double x = grid.node(j);
        const double du_sig = du_next(j) * sbar[j];
        if (driver.mean_affine) {
            fnl[j] = driver.f(t, mean_x, x, mean_u_cloud, u_next[j], du_sig);
        } else {
            double s = 0.0;
            for (std::size_t i = 0; i < N; ++i)
                s += driver.f(t, xs[i], x, u_on_cloud[i], u_next[j], du_sig);
            fnl[j] = s / static_cast<double>(N);
        }
    });

    // Discrete generator A u = (a/2) u_xx + bbar u_x with linear-extrapolation
    // lateral boundaries folded into the first and last interior rows.
    const auto a_coef = [&](std::size_t j) { return sbar[j] * sbar[j]; };
    const auto apply_A = [&](const std::vector<double>& u, std::size_t j) {
        if (j == 1)
            return bbar[1] * (u[2] - u[1]) / dx;
        if (j == J)
            return bbar[J] * (u[J] - u[J - 1]) / dx;
        const double uxx = (u[j - 1] - 2.0 * u[j] + u[j + 1]) / (dx * dx);
        const double ux = (u[j + 1] - u[j - 1]) / (2.0 * dx);
        return 0.5 * a_coef(j) * uxx + bbar[j] * ux;
    };

    // (I - theta h A) u_m = u_next + (1-theta) h A u_next + h F_nl (interior).
    std::vector<double> sub(J, 0.0), diag(J, 0.0), sup(J, 0.0), rhs(J, 0.0);
    for (std::size_t j = 1; j <= J; ++j) {
        const std::size_t k = j - 1;
        double dl = 0.0, dd = 0.0, du = 0.0;
        if (j == 1) {
            dd = -bbar[1] / dx;
            du = bbar[1] / dx;
        } else if (j == J) {
            dl = -bbar[J] / dx;
            dd = bbar[J] / dx;
        } else {
            const double da = 0.5 * a_coef(j) / (dx * dx);
            const double db = bbar[j] / (2.0 * dx);
            dl = da - db;
            dd = -2.0 * da;
            du = da + db;
        }
        sub[k] = -theta * h * dl;
        diag[k] = 1.0 - theta * h * dd;
        sup[k] = -theta * h * du;
        rhs[k] = u_next[j] + (1.0 - theta) * h * apply_A(u_next, j) + h * fnl[j];
    }
    tridiag_solve(sub, diag, sup, rhs);

    std::vector<double> u_m(J + 2);
    for (std::size_t j = 1; j <= J; ++j) u_m[j] = rhs[j - 1];
    u_m[0] = 2.0 * u_m[1] - u_m[2];
    u_m[J + 1] = 2.0 * u_m[J] - u_m[J - 1];

    // Nodewise penalty / prox update.
    parallel_for(0, J + 2, [&](std::size_t j) {
        u_m[j] = form == PviForm::Penalized ? phi.implicit_penalty_step(eps, h, u_m[j])
                                            : phi.resolvent(h, u_m[j]);
    });

    double sup_m = 0.0, sup_next = 0.0;
    for (std::size_t j = 0; j < J + 2; ++j) {
        if (!std::isfinite(u_m[j]))
            throw DivergedError("assemble_step: non-finite value at node j=" + std::to_string(j));
        sup_m = std::max(sup_m, std::fabs(u_m[j]));
        sup_next = std::max(sup_next, std::fabs(u_next[j]));
    }
    if (sup_m > 1e3 * (1.0 + sup_next))
        throw DivergedError("assemble_step: step diverged at m=" + std::to_string(m));
    return u_m;
}

FieldSolution solve_pvi(const BaselineLaw& law, const CoefficientModel& model,
                        const DriverModel& driver, const ConvexObstacle& phi,
                        const TimeGrid& tgrid, const SpaceGrid& xgrid, double eps, PviForm form,
                        double theta) {
    if (tgrid.M != law.grid().M || tgrid.T != law.grid().T)
        throw ConfigError("solve_pvi: time grid must match the baseline law");
    FieldSolution f;
    f.tgrid = tgrid;
    f.xgrid = xgrid;
    f.provenance = "pde-oracle";
    f.values.assign(tgrid.M + 1, {});
    f.values[tgrid.M] = terminal_condition(law, driver, xgrid, phi);
    for (std::size_t m = tgrid.M; m-- > 0;) {
        try {
            f.values[m] =
                assemble_step(law, model, driver, phi, f.values[m + 1], m, xgrid, eps, theta, form);
        } catch (const DivergedError& e) {
            throw DivergedError(std::string(e.what()) + " (backward march at node m=" +
                                std::to_string(m) + ")");
        }
    }
    return f;
}

double field_value(const FieldSolution& f, double t, double x) {
    const double h = f.tgrid.h();
    double s = t / h;
    if (s <= 0.0) return interp_row(f.values.front(), f.xgrid, x);
    if (s >= static_cast<double>(f.tgrid.M)) return interp_row(f.values.back(), f.xgrid, x);
    std::size_t m = static_cast<std::size_t>(s);
    const double w = s - static_cast<double>(m);
    return (1.0 - w) * interp_row(f.values[m], f.xgrid, x) +
           w * interp_row(f.values[m + 1], f.xgrid, x);
}

FieldErrorReport field_error(const FieldSolution& a, const FieldSolution& b,
                             const std::vector<Probe>& probes) {
    FieldErrorReport rep;
    double sq = 0.0;
    for (const Probe& p : probes) {
        ProbeError pe;
        pe.t = p.t;
        pe.x = p.x;
        pe.a = field_value(a, p.t, p.x);
        pe.b = field_value(b, p.t, p.x);
        pe.err = std::fabs(pe.a - pe.b);
        rep.sup_err = std::max(rep.sup_err, pe.err);
        sq += pe.err * pe.err;
        rep.table.push_back(pe);
    }
    if (!probes.empty()) rep.l2_err = std::sqrt(sq / static_cast<double>(probes.size()));
    return rep;
}

}  // namespace bsvi
