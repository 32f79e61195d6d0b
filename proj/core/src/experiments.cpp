#include "bsvi/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bsvi/csv_io.hpp"

namespace bsvi {

namespace {

double slice_rms_gap(const BackwardSolution& a, const BackwardSolution& b) {
    double worst = 0.0;
    for (std::size_t m = 0; m < a.Y.size(); ++m) {
        double sq = 0.0;
        for (std::size_t i = 0; i < a.Y[m].size(); ++i) {
            const double d = a.Y[m][i] - b.Y[m][i];
            sq += d * d;
        }
        worst = std::max(worst, sq / static_cast<double>(a.Y[m].size()));
    }
    return std::sqrt(worst);
}

}  // namespace

ConvergenceResult run_convergence_epsilon(const RunConfig& config) {
    if (config.eps_list.size() < 3)
        throw ConfigError("run_convergence_epsilon: need at least 3 epsilon values");
    const CoefficientModel model = config.make_model();
    const DriverModel driver = config.make_driver();
    const ConvexObstacle phi = config.make_obstacle();
    const BaselineLaw law =
        simulate_baseline(model, config.x0, config.time_grid(), config.N, config.seed);

    const std::function<double(double)> extra =
        config.augment_basis ? terminal_basis(law, driver) : std::function<double(double)>{};

    SchemeParams ref_params = config.scheme_params(config.eps_list.back());
    ref_params.scheme = PenaltyScheme::Proximal;
    ref_params.extra_basis = extra;
    const BackwardSolution ref = solve_baseline_bsde(law, model, driver, phi, ref_params);
    const double floor = 3.0 * ref.y0_stderr;

    ConvergenceResult res;
    for (double eps : config.eps_list) {
        SchemeParams p = config.scheme_params(eps);
        p.scheme = PenaltyScheme::PenalizedImplicit;
        p.extra_basis = extra;
        BackwardSolution sol;
        try {
            sol = solve_baseline_bsde(law, model, driver, phi, p);
        } catch (const Error& e) {
            throw DivergedError("run_convergence_epsilon: sub-run at eps = " +
                                std::to_string(eps) + " failed: " + e.what());
        }
        ConvergenceRow row;
        row.eps = eps;
        row.dist = slice_rms_gap(sol, ref);
        row.noise_floor = floor;
        row.in_fit = row.dist > floor;
        res.rows.push_back(row);
    }

    std::vector<double> lx, ly;
    for (const ConvergenceRow& r : res.rows)
        if (r.in_fit && r.dist > 0.0) {
            lx.push_back(std::log(r.eps));
            ly.push_back(std::log(r.dist));
        }
    const std::size_t n = lx.size();
    double max_dist = 0.0;
    for (const ConvergenceRow& r : res.rows) max_dist = std::max(max_dist, r.dist);
    if (max_dist <= 1e-10) {
        res.applicable = false;
        res.note = "penalty inert: all distances at machine level, slope not applicable";
        return res;
    }
    if (n < 2) {
        res.applicable = false;
        res.note = "fewer than 2 rows above the noise floor, slope not applicable";
        return res;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    res.slope = sxy / sxx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ly[i] - my - res.slope * (lx[i] - mx);
            rss += r * r;
        }
        res.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    res.applicable = true;
    return res;
}

std::vector<std::size_t> probe_t_indices(const RunConfig& config) {
    const TimeGrid tg = config.time_grid();
    std::vector<std::size_t> idx;
    for (double t : config.probe_times) {
        if (!(t >= 0.0 && t <= config.T))
            throw ConfigError("probe time outside [0, T]: " + std::to_string(t));
        idx.push_back(static_cast<std::size_t>(std::llround(t / tg.h())));
    }
    return idx;
}

std::vector<double> probe_x_values(const RunConfig& config) {
    const SpaceGrid g = config.space_grid();
    const double lo = g.margin_lo(), hi = g.margin_hi();
    const std::size_t n = config.probe_x_count;
    std::vector<double> xs(n);
    for (std::size_t k = 0; k < n; ++k)
        xs[k] = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(n + 1);
    return xs;
}

CompareResult run_compare(const RunConfig& config) {
    const CoefficientModel model = config.make_model();
    const DriverModel driver = config.make_driver();
    const ConvexObstacle phi = config.make_obstacle();
    const TimeGrid tg = config.time_grid();
    const SpaceGrid xg = config.space_grid();
    const double eps = config.eps_list.front();

    const BaselineLaw law = simulate_baseline(model, config.x0, tg, config.N, config.seed);
    SchemeParams params = config.scheme_params(eps);
    if (config.augment_basis) params.extra_basis = terminal_basis(law, driver);

    CompareResult res;
    res.baseline = solve_baseline_bsde(law, model, driver, phi, params);
    res.pde = solve_pvi(law, model, driver, phi, tg, xg, eps, config.pvi_form, config.theta);

    const std::vector<std::size_t> tidx = probe_t_indices(config);
    const std::vector<double> xs = probe_x_values(config);
    res.ufield = build_u_field(law, res.baseline, model, driver, phi, tidx, xs, config.K, params,
                               config.seed);

    double sq = 0.0;
    std::size_t nok = 0;
    bool all_ok = true;
    for (const UFieldNode& node : res.ufield.nodes) {
        ProbeRow row;
        row.t = tg.node(node.t_index);
        row.x = node.x;
        row.ok = node.ok;
        row.error = node.error;
        if (node.ok) {
            row.u_prob = node.u;
            row.stderr_ = node.stderr_;
            row.u_pde = field_value(res.pde, row.t, row.x);
            row.err = std::fabs(row.u_prob - row.u_pde);
            res.sup_err = std::max(res.sup_err, row.err);
            sq += row.err * row.err;
            ++nok;
        } else {
            all_ok = false;
        }
        res.table.push_back(row);
    }
    if (nok > 0) res.l2_err = std::sqrt(sq / static_cast<double>(nok));
    res.pass = all_ok && nok > 0 && res.sup_err <= config.tol_sup_err;
    return res;
}

void save_convergence(const ConvergenceResult& res, const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw Error("save_convergence: cannot open " + csv_path.string());
    os << "eps,dist,noise_floor,in_fit\n";
    for (const ConvergenceRow& r : res.rows)
        os << fmt17(r.eps) << ',' << fmt17(r.dist) << ',' << fmt17(r.noise_floor) << ','
           << (r.in_fit ? 1 : 0) << '\n';
}

void save_probe_table(const CompareResult& res, const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw Error("save_probe_table: cannot open " + csv_path.string());
    os << "t,x,u_prob,stderr,u_pde,abs_err,ok\n";
    for (const ProbeRow& r : res.table)
        os << fmt17(r.t) << ',' << fmt17(r.x) << ',' << fmt17(r.u_prob) << ',' << fmt17(r.stderr_)
           << ',' << fmt17(r.u_pde) << ',' << fmt17(r.err) << ',' << (r.ok ? 1 : 0) << '\n';
}

}  // namespace bsvi
