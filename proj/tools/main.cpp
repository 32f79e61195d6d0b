// Command-line front end: property suite, forward simulation, backward
// solves, PDE fields, cross-solver comparison and the epsilon-rate study,
// all driven by a single JSON run config.
//
// Exit codes: 0 pass, 1 acceptance failure, 2 configuration error,
// 3 numeric failure.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "bsvi/csv_io.hpp"
#include "bsvi/experiments.hpp"
#include "bsvi/parallel.hpp"
#include "bsvi/props.hpp"
#include "bsvi/report.hpp"

namespace fs = std::filesystem;
using namespace bsvi;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    bool force = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config_path, "run config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", o.seed, "seed override")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--threads", o.threads, "worker thread count");
    cmd->add_flag("--force", o.force, "overwrite an existing manifest");
}

RunConfig resolve(const CommonOpts& o) {
    RunConfig cfg = load_config(o.config_path);
    if (o.seed_set) cfg.seed = o.seed;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";
    if (o.threads > 0) set_thread_count(o.threads);
    fs::create_directories(cfg.out_dir);
    return cfg;
}

ReportManifest base_manifest(const RunConfig& cfg, const std::string& what) {
    ReportManifest m;
    m.config_hash = cfg.config_hash();
    m.run_id = what + "-" + m.config_hash + "-s" + std::to_string(cfg.seed);
    m.seed = cfg.seed;
    return m;
}

int run_props(const CommonOpts& o) {
    std::uint64_t seed = o.seed_set ? o.seed : 42;
    if (o.threads > 0) set_thread_count(o.threads);
    const PropertySuiteResult res = run_property_suite(10000, seed);
    std::string last;
    for (const PropertyItemResult& it : res.items) {
        if (it.obstacle != last) {
            std::printf("%s\n", it.obstacle.c_str());
            last = it.obstacle;
        }
        std::printf("  item %-3s %s  (failures %zu/%zu, worst %.3g, tol %.0e)\n",
                    it.item.c_str(), it.pass() ? "pass" : "FAIL", it.failures, it.samples,
                    it.worst, it.tol);
    }
    std::printf("property suite: %s\n", res.pass ? "pass" : "FAIL");
    return res.pass ? 0 : 1;
}

int run_forward(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    const BaselineLaw law =
        simulate_baseline(cfg.make_model(), cfg.x0, cfg.time_grid(), cfg.N, cfg.seed);
    save_cloud(law, cfg.model_name, fs::path(cfg.out_dir) / "cloud.csv");
    ReportManifest m = base_manifest(cfg, "forward");
    m.artifacts.push_back({"cloud.csv", ""});
    m.checks.push_back({"forward-complete", true});
    emit_report(std::move(m), cfg.out_dir, o.force);
    std::printf("cloud written to %s (N=%zu, M=%zu)\n", cfg.out_dir.c_str(), cfg.N, cfg.M);
    return 0;
}

int run_bsde(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    const CoefficientModel model = cfg.make_model();
    const DriverModel driver = cfg.make_driver();
    const ConvexObstacle phi = cfg.make_obstacle();
    const BaselineLaw law = simulate_baseline(model, cfg.x0, cfg.time_grid(), cfg.N, cfg.seed);
    SchemeParams params = cfg.scheme_params(cfg.eps_list.front());
    if (cfg.augment_basis) params.extra_basis = terminal_basis(law, driver);
    const BackwardSolution sol = solve_baseline_bsde(law, model, driver, phi, params);
    save_backward(sol, fs::path(cfg.out_dir) / "backward.csv");
    ReportManifest m = base_manifest(cfg, "bsde");
    m.artifacts.push_back({"backward.csv", ""});
    m.checks.push_back({"bsde-complete", true});
    emit_report(std::move(m), cfg.out_dir, o.force);
    std::printf("Y0 = %.8g  (stderr %.3g)\n", sol.y0, sol.y0_stderr);
    return 0;
}

int run_pvi_cmd(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    const CoefficientModel model = cfg.make_model();
    const DriverModel driver = cfg.make_driver();
    const ConvexObstacle phi = cfg.make_obstacle();
    const BaselineLaw law = simulate_baseline(model, cfg.x0, cfg.time_grid(), cfg.N, cfg.seed);
    const FieldSolution f = solve_pvi(law, model, driver, phi, cfg.time_grid(), cfg.space_grid(),
                                      cfg.eps_list.front(), cfg.pvi_form, cfg.theta);
    save_field(f, fs::path(cfg.out_dir) / "field.csv");
    ReportManifest m = base_manifest(cfg, "pvi");
    m.artifacts.push_back({"field.csv", ""});
    m.checks.push_back({"pvi-complete", true});
    emit_report(std::move(m), cfg.out_dir, o.force);
    std::printf("field written to %s (u(0, x0) = %.8g)\n", cfg.out_dir.c_str(),
                field_value(f, 0.0, cfg.x0));
    return 0;
}

int run_compare_cmd(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    const CompareResult res = run_compare(cfg);
    save_probe_table(res, fs::path(cfg.out_dir) / "probes.csv");
    save_field(res.pde, fs::path(cfg.out_dir) / "field.csv");
    save_u_field(res.ufield, cfg.time_grid(), fs::path(cfg.out_dir) / "u_probes.csv");
    ReportManifest m = base_manifest(cfg, "compare");
    m.artifacts.push_back({"probes.csv", ""});
    m.artifacts.push_back({"field.csv", ""});
    m.artifacts.push_back({"u_probes.csv", ""});
    m.checks.push_back({"compare-sup-err", res.pass});
    emit_report(std::move(m), cfg.out_dir, o.force);
    std::printf("sup_err = %.6g, l2_err = %.6g, tol = %.3g: %s\n", res.sup_err, res.l2_err,
                cfg.tol_sup_err, res.pass ? "pass" : "FAIL");
    return res.pass ? 0 : 1;
}

int run_convergence_cmd(const CommonOpts& o) {
    RunConfig cfg = resolve(o);
    const ConvergenceResult res = run_convergence_epsilon(cfg);
    save_convergence(res, fs::path(cfg.out_dir) / "convergence.csv");
    ReportManifest m = base_manifest(cfg, "convergence");
    m.artifacts.push_back({"convergence.csv", ""});
    m.checks.push_back({"convergence-complete", true});
    emit_report(std::move(m), cfg.out_dir, o.force);
    for (const ConvergenceRow& r : res.rows)
        std::printf("eps %-8.3g dist %-12.6g %s\n", r.eps, r.dist,
                    r.in_fit ? "" : "[noise-floor]");
    if (res.applicable)
        std::printf("slope = %.4f +- %.4f\n", res.slope, res.slope_stderr);
    else
        std::printf("slope: not applicable (%s)\n", res.note.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field backward SDE and variational-inequality lab"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* props = app.add_subcommand("props", "convex-analysis property suite");
    add_common(props, o, false);
    auto* fwd = app.add_subcommand("forward", "simulate the baseline particle cloud");
    add_common(fwd, o, true);
    auto* bsde = app.add_subcommand("bsde", "baseline backward solve");
    add_common(bsde, o, true);
    auto* pvi = app.add_subcommand("pvi", "finite-difference field solve");
    add_common(pvi, o, true);
    auto* cmp = app.add_subcommand("compare", "probabilistic field vs PDE oracle");
    add_common(cmp, o, true);
    auto* conv = app.add_subcommand("convergence", "epsilon-rate study");
    add_common(conv, o, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (props->parsed()) return run_props(o);
        if (fwd->parsed()) return run_forward(o);
        if (bsde->parsed()) return run_bsde(o);
        if (pvi->parsed()) return run_pvi_cmd(o);
        if (cmp->parsed()) return run_compare_cmd(o);
        if (conv->parsed()) return run_convergence_cmd(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
