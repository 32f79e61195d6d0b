#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bsvi/bsde.hpp"
#include "bsvi/config.hpp"
#include "bsvi/pvi.hpp"

namespace bsvi {

// Epsilon-rate study: penalized baseline solves against a proximal reference
// on the same particle cloud, log-log slope fitted by least squares. Rows at
// the Monte Carlo noise floor (3 standard errors of Y0) are excluded from the
// fit and flagged in the table.
struct ConvergenceRow {
    double eps = 0.0;
    double dist = 0.0;         // sup_m of the per-slice rms gap to the reference
    double noise_floor = 0.0;  // 3 * stderr of the reference Y0
    bool in_fit = false;
};
struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;
    double slope_stderr = 0.0;
    bool applicable = false;  // false when too few rows survive the floor
    std::string note;
};
ConvergenceResult run_convergence_epsilon(const RunConfig& config);

// Cross-solver comparison: probabilistic u(t, x) from conditional backward
// solves against the finite-difference field, on the configured probe grid.
struct ProbeRow {
    double t = 0.0;
    double x = 0.0;
    double u_prob = 0.0;
    double stderr_ = 0.0;
    double u_pde = 0.0;
    double err = 0.0;
    bool ok = false;
    std::string error;
};
struct CompareResult {
    std::vector<ProbeRow> table;
    double sup_err = 0.0;
    double l2_err = 0.0;
    bool pass = false;
    BackwardSolution baseline;
    FieldSolution pde;
    UField ufield;
};
CompareResult run_compare(const RunConfig& config);

// Probe layout shared by run_compare and the acceptance suite: configured
// times snapped to grid nodes, x values equally spaced strictly inside the
// probe margins.
std::vector<std::size_t> probe_t_indices(const RunConfig& config);
std::vector<double> probe_x_values(const RunConfig& config);

void save_convergence(const ConvergenceResult& res, const std::filesystem::path& csv_path);
void save_probe_table(const CompareResult& res, const std::filesystem::path& csv_path);

}  // namespace bsvi
