#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsvi/grids.hpp"
#include "bsvi/model.hpp"
#include "bsvi/obstacle.hpp"
#include "bsvi/bsde.hpp"
#include "bsvi/pvi.hpp"

namespace bsvi {

// Declarative run configuration, loaded from a single JSON document.
//
// Benchmark presets ship with the library:
//   CF1  - no obstacle, linear driver, closed form Y_t = e^{(alpha+beta)(T-t)}
//   RF1  - reflection at 0, f = 0, Bachelier terminal (inactive constraint)
//   HEAT - heat-equation benchmark u = x^2 + (T - t)
//   BM1  - full mean-field reflected problem
struct RunConfig {
    std::string preset;        // optional named benchmark
    std::string model_name;    // coefficient preset id
    nlohmann::json model_params;
    std::string driver_name;   // driver preset id
    nlohmann::json driver_params;
    nlohmann::json obstacle;   // serialized ConvexObstacle description

    double T = 1.0;
    std::size_t M = 100;
    std::size_t N = 1000;
    std::size_t K = 1000;
    std::size_t J = 100;
    double x_lo = -3.0;
    double x_hi = 3.0;
    double x0 = 0.0;

    std::vector<double> eps_list{1e-2};
    PenaltyScheme scheme = PenaltyScheme::PenalizedImplicit;
    PviForm pvi_form = PviForm::Penalized;
    int basis_degree = 3;
    double ridge = 1e-8;
    double theta = 1.0;
    // Adds the frozen terminal map as a regression feature (absorbs payoff
    // kinks that a global polynomial basis undershoots).
    bool augment_basis = false;

    std::uint64_t seed = 0;
    std::string out_dir;

    std::vector<double> probe_times{0.25, 0.5, 0.75};
    std::size_t probe_x_count = 9;
    double tol_sup_err = 0.05;

    TimeGrid time_grid() const { return TimeGrid(T, M); }
    SpaceGrid space_grid() const { return SpaceGrid(x_lo, x_hi, J); }
    SchemeParams scheme_params(double eps) const {
        return SchemeParams{eps, scheme, basis_degree, ridge, {}};
    }

    CoefficientModel make_model() const;
    DriverModel make_driver() const;
    ConvexObstacle make_obstacle() const;

    // Canonical JSON (sorted keys, defaults filled) used for hashing; the seed
    // is excluded so reruns with a new seed share the config hash.
    nlohmann::json canonical() const;
    std::string config_hash() const;
};

// Parses and validates; reports every schema violation found, not just the
// first, in the ConfigError message.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& doc);

// Named whole-run presets (CF1, RF1, HEAT, BM1).
RunConfig preset_config(const std::string& name);

// Registries for the model / driver / obstacle pieces.
CoefficientModel make_coefficient_model(const std::string& name, const nlohmann::json& params);
DriverModel make_driver_model(const std::string& name, const nlohmann::json& params);
ConvexObstacle obstacle_from_json(const nlohmann::json& doc);
nlohmann::json obstacle_to_json(const ConvexObstacle& phi);

}  // namespace bsvi
