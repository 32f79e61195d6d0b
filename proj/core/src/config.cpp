#include "bsvi/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bsvi/report.hpp"

namespace bsvi {

namespace {

double jget(const nlohmann::json& j, const char* key, double dflt) {
    return j.contains(key) ? j.at(key).get<double>() : dflt;
}

}  // namespace

CoefficientModel make_coefficient_model(const std::string& name, const nlohmann::json& params) {
    CoefficientModel m;
    m.name = name;
    if (name == "frozen") {
        m.drift = [](double, double, double) { return 0.0; };
        m.diffusion = [](double, double, double) { return 0.0; };
        m.mean_affine = true;
        m.lipschitz_k = 0.0;
    } else if (name == "brownian") {
        const double sigma = jget(params, "sigma", 1.0);
        m.drift = [](double, double, double) { return 0.0; };
        m.diffusion = [sigma](double, double, double) { return sigma; };
        m.mean_affine = true;
        m.lipschitz_k = 0.0;
    } else if (name == "const_drift") {
        const double mu = jget(params, "mu", 0.0);
        const double sigma = jget(params, "sigma", 0.0);
        m.drift = [mu](double, double, double) { return mu; };
        m.diffusion = [sigma](double, double, double) { return sigma; };
        m.mean_affine = true;
        m.lipschitz_k = 0.0;
    } else if (name == "mean_revert_to_cloud") {
        // b(t, x', x) = kappa (x' - x), sigma constant.
        const double kappa = jget(params, "kappa", 0.25);
        const double sigma = jget(params, "sigma", 0.5);
        m.drift = [kappa](double, double xp, double x) { return kappa * (xp - x); };
        m.diffusion = [sigma](double, double, double) { return sigma; };
        m.mean_affine = true;
        m.lipschitz_k = kappa;
    } else {
        throw ConfigError("unknown coefficient model preset '" + name + "'");
    }
    return m;
}

DriverModel make_driver_model(const std::string& name, const nlohmann::json& params) {
    DriverModel d;
    d.name = name;
    if (name == "const_terminal") {
        const double c = jget(params, "c", 1.0);
        d.f = [](double, double, double, double, double, double) { return 0.0; };
        d.h = [c](double, double) { return c; };
        d.mean_affine = true;
        d.h_mean_affine = true;
        d.monotone_in_yprime = true;
    } else if (name == "linear_mf") {
        // f = alpha y' + beta y + c, constant terminal hconst.
        const double alpha = jget(params, "alpha", 0.5);
        const double beta = jget(params, "beta", 0.5);
        const double c = jget(params, "c", 0.0);
        const double hconst = jget(params, "hconst", 1.0);
        d.f = [alpha, beta, c](double, double, double, double yp, double y, double) {
            return alpha * yp + beta * y + c;
        };
        d.h = [hconst](double, double) { return hconst; };
        d.mean_affine = true;
        d.h_mean_affine = true;
        d.monotone_in_yprime = alpha >= 0.0;
    } else if (name == "bachelier") {
        d.f = [](double, double, double, double, double, double) { return 0.0; };
        d.h = [](double, double x) { return std::max(x, 0.0); };
        d.mean_affine = true;
        d.h_mean_affine = true;
        d.monotone_in_yprime = true;
    } else if (name == "heat_square") {
        const double shift = jget(params, "shift", 0.0);
        d.f = [](double, double, double, double, double, double) { return 0.0; };
        d.h = [shift](double, double x) { return x * x + shift; };
        d.mean_affine = true;
        d.h_mean_affine = true;
        d.monotone_in_yprime = true;
    } else if (name == "bm1") {
        // f = alpha y' + beta y, h(x', x) = min((x + w x')^+, cap).
        const double alpha = jget(params, "alpha", 0.5);
        const double beta = jget(params, "beta", -0.5);
        const double w = jget(params, "w", 0.1);
        const double cap = jget(params, "cap", 2.0);
        d.f = [alpha, beta](double, double, double, double yp, double y, double) {
            return alpha * yp + beta * y;
        };
        d.h = [w, cap](double xp, double x) { return std::min(std::max(x + w * xp, 0.0), cap); };
        d.mean_affine = true;
        d.h_mean_affine = false;
        d.monotone_in_yprime = alpha >= 0.0;
    } else {
        throw ConfigError("unknown driver preset '" + name + "'");
    }
    return d;
}

ConvexObstacle obstacle_from_json(const nlohmann::json& doc) {
    const std::string kind = doc.value("kind", "zero");
    const auto ext = [&](const char* key, ExtReal dflt) {
        if (!doc.contains(key) || doc.at(key).is_null()) return dflt;
        return ExtReal(doc.at(key).get<double>());
    };
    if (kind == "zero") return ConvexObstacle::zero();
    if (kind == "indicator_interval")
        return ConvexObstacle::indicator_interval(ext("a", ExtReal::neg_inf()),
                                                  ext("b", ExtReal::pos_inf()));
    if (kind == "quadratic") return ConvexObstacle::quadratic(doc.value("c", 1.0));
    if (kind == "power_abs") return ConvexObstacle::power_abs(doc.value("p", 2.0));
    if (kind == "piecewise_linear")
        return ConvexObstacle::piecewise_linear(doc.at("breaks").get<std::vector<double>>(),
                                                doc.at("slopes").get<std::vector<double>>());
    if (kind == "custom")
        throw ConfigError("custom obstacles are code-only and not serializable");
    throw ConfigError("unknown obstacle kind '" + kind + "'");
}

nlohmann::json obstacle_to_json(const ConvexObstacle& phi) {
    nlohmann::json j{{"kind", phi.kind_name()}};
    switch (phi.kind()) {
        case ConvexObstacle::Kind::IndicatorInterval:
            j["a"] = phi.domain_lo().is_finite() ? nlohmann::json(phi.domain_lo().value())
                                                 : nlohmann::json(nullptr);
            j["b"] = phi.domain_hi().is_finite() ? nlohmann::json(phi.domain_hi().value())
                                                 : nlohmann::json(nullptr);
            break;
        case ConvexObstacle::Kind::Quadratic:
            j["c"] = phi.quadratic_c();
            break;
        case ConvexObstacle::Kind::PowerAbs:
            j["p"] = phi.power_p();
            break;
        case ConvexObstacle::Kind::PiecewiseLinearConvex:
            j["breaks"] = phi.pl_breaks();
            j["slopes"] = phi.pl_slopes();
            break;
        case ConvexObstacle::Kind::Custom:
            throw ConfigError("custom obstacles are code-only and not serializable");
        default:
            break;
    }
    return j;
}

CoefficientModel RunConfig::make_model() const {
    return make_coefficient_model(model_name, model_params);
}
DriverModel RunConfig::make_driver() const { return make_driver_model(driver_name, driver_params); }
ConvexObstacle RunConfig::make_obstacle() const { return obstacle_from_json(obstacle); }

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "CF1") {
        c.model_name = "brownian";
        c.driver_name = "linear_mf";
        c.driver_params = {{"alpha", 0.5}, {"beta", 0.5}, {"hconst", 1.0}};
        c.obstacle = {{"kind", "zero"}};
        c.M = 100;
        c.N = 10000;
    } else if (name == "RF1") {
        c.model_name = "brownian";
        c.driver_name = "bachelier";
        c.obstacle = {{"kind", "indicator_interval"}, {"a", 0.0}, {"b", nullptr}};
        c.M = 100;
        c.N = 10000;
        c.eps_list = {1e-1};
        c.augment_basis = true;
    } else if (name == "HEAT") {
        c.model_name = "brownian";
        c.driver_name = "heat_square";
        c.obstacle = {{"kind", "zero"}};
        c.M = 100;
        c.N = 2000;
        c.J = 100;
        // Wide box: the extrapolation boundary rows carry no diffusion, and
        // the resulting layer must decay before the probe region.
        c.x_lo = -10.0;
        c.x_hi = 10.0;
    } else if (name == "BM1") {
        c.model_name = "mean_revert_to_cloud";
        c.model_params = {{"kappa", 0.25}, {"sigma", 0.5}};
        c.driver_name = "bm1";
        c.obstacle = {{"kind", "indicator_interval"}, {"a", 0.0}, {"b", nullptr}};
        c.M = 100;
        c.N = 10000;
        c.K = 5000;
        c.J = 200;
        c.x_lo = -3.0;
        c.x_hi = 3.0;
        c.eps_list = {1e-1, 3e-2, 1e-2, 3e-3};
    } else {
        throw ConfigError("unknown benchmark preset '" + name + "'");
    }
    return c;
}

RunConfig config_from_json(const nlohmann::json& doc) {
    std::vector<std::string> errs;
    const auto complain = [&](const std::string& msg) { errs.push_back(msg); };

    static const std::vector<std::string> known{
        "preset", "model", "driver", "obstacle", "grids",
        "scheme", "seed",  "out_dir", "probes",  "tolerance"};
    for (const auto& [key, _] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            complain("unknown field '" + key + "'");

    RunConfig c;
    try {
        if (doc.contains("preset")) c = preset_config(doc.at("preset").get<std::string>());
    } catch (const ConfigError& e) {
        complain(e.what());
    }

    if (doc.contains("model")) {
        const auto& m = doc.at("model");
        c.model_name = m.value("name", c.model_name);
        if (m.contains("params")) c.model_params = m.at("params");
    }
    if (doc.contains("driver")) {
        const auto& d = doc.at("driver");
        c.driver_name = d.value("name", c.driver_name);
        if (d.contains("params")) c.driver_params = d.at("params");
    }
    if (doc.contains("obstacle")) c.obstacle = doc.at("obstacle");
    if (c.obstacle.is_null()) c.obstacle = {{"kind", "zero"}};

    if (doc.contains("grids")) {
        const auto& g = doc.at("grids");
        c.T = g.value("T", c.T);
        c.M = g.value("M", c.M);
        c.N = g.value("N", c.N);
        c.K = g.value("K", c.K);
        c.J = g.value("J", c.J);
        c.x_lo = g.value("x_lo", c.x_lo);
        c.x_hi = g.value("x_hi", c.x_hi);
        c.x0 = g.value("x0", c.x0);
    }
    if (doc.contains("scheme")) {
        const auto& s = doc.at("scheme");
        if (s.contains("eps_list")) c.eps_list = s.at("eps_list").get<std::vector<double>>();
        if (s.contains("form")) {
            const std::string f = s.at("form").get<std::string>();
            if (f == "penalized-implicit")
                c.scheme = PenaltyScheme::PenalizedImplicit;
            else if (f == "proximal")
                c.scheme = PenaltyScheme::Proximal;
            else
                complain("scheme.form must be 'penalized-implicit' or 'proximal', got '" + f + "'");
        }
        if (s.contains("pvi_form")) {
            const std::string f = s.at("pvi_form").get<std::string>();
            if (f == "penalized")
                c.pvi_form = PviForm::Penalized;
            else if (f == "prox")
                c.pvi_form = PviForm::Prox;
            else
                complain("scheme.pvi_form must be 'penalized' or 'prox', got '" + f + "'");
        }
        c.basis_degree = s.value("basis_degree", c.basis_degree);
        c.ridge = s.value("ridge", c.ridge);
        c.theta = s.value("theta", c.theta);
        c.augment_basis = s.value("augment_basis", c.augment_basis);
    }
    if (doc.contains("seed"))
        c.seed = doc.at("seed").get<std::uint64_t>();
    else
        complain("missing required field 'seed'");
    c.out_dir = doc.value("out_dir", c.out_dir);
    if (doc.contains("probes")) {
        const auto& p = doc.at("probes");
        if (p.contains("t")) c.probe_times = p.at("t").get<std::vector<double>>();
        c.probe_x_count = p.value("x_count", c.probe_x_count);
    }
    if (doc.contains("tolerance")) c.tol_sup_err = doc.at("tolerance").value("sup_err", c.tol_sup_err);

    // Invariants.
    if (c.model_name.empty()) complain("missing model.name (and no preset given)");
    if (c.driver_name.empty()) complain("missing driver.name (and no preset given)");
    if (!(c.T > 0.0)) complain("grids.T must be > 0");
    if (c.M < 1) complain("grids.M must be >= 1");
    if (c.N < 2) complain("grids.N must be >= 2");
    if (c.K < 1) complain("grids.K must be >= 1");
    if (c.J < 8) complain("grids.J must be >= 8");
    if (!(c.x_lo < c.x_hi)) complain("grids: x_lo must be < x_hi");
    if (c.eps_list.empty()) complain("scheme.eps_list must be nonempty");
    for (std::size_t i = 0; i + 1 < c.eps_list.size(); ++i)
        if (!(c.eps_list[i] > c.eps_list[i + 1])) {
            complain("epsilon list not strictly decreasing");
            break;
        }
    for (double e : c.eps_list)
        if (!(e > 0.0)) {
            complain("scheme.eps_list entries must be > 0");
            break;
        }
    if (c.basis_degree < 1) complain("scheme.basis_degree must be >= 1");
    if (c.ridge < 0.0) complain("scheme.ridge must be >= 0");
    if (!(c.theta >= 0.0 && c.theta <= 1.0)) complain("scheme.theta must lie in [0, 1]");
    if (!c.model_name.empty()) {
        try {
            (void)c.make_model();
        } catch (const ConfigError& e) {
            complain(e.what());
        }
    }
    if (!c.driver_name.empty()) {
        try {
            (void)c.make_driver();
        } catch (const ConfigError& e) {
            complain(e.what());
        }
    }
    try {
        (void)c.make_obstacle();
    } catch (const Error& e) {
        complain(e.what());
    }

    if (!errs.empty()) {
        std::string msg = "invalid run config (" + std::to_string(errs.size()) + " violations):";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config file not found: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

nlohmann::json RunConfig::canonical() const {
    nlohmann::json j;
    j["preset"] = preset;
    j["model"] = {{"name", model_name}, {"params", model_params}};
    j["driver"] = {{"name", driver_name}, {"params", driver_params}};
    j["obstacle"] = obstacle;
    j["grids"] = {{"T", T},     {"M", M},         {"N", N},         {"K", K}, {"J", J},
                  {"x_lo", x_lo}, {"x_hi", x_hi}, {"x0", x0}};
    j["scheme"] = {
        {"eps_list", eps_list},
        {"form", scheme == PenaltyScheme::PenalizedImplicit ? "penalized-implicit" : "proximal"},
        {"pvi_form", pvi_form == PviForm::Penalized ? "penalized" : "prox"},
        {"basis_degree", basis_degree},
        {"ridge", ridge},
        {"theta", theta},
        {"augment_basis", augment_basis}};
    j["probes"] = {{"t", probe_times}, {"x_count", probe_x_count}};
    j["tolerance"] = {{"sup_err", tol_sup_err}};
    // seed and out_dir deliberately excluded from the hashed document
    return j;
}

std::string RunConfig::config_hash() const { return fnv1a_hex(canonical().dump()); }

}  // namespace bsvi
