#pragma once

#include <string>
#include <vector>

#include "bsvi/bsde.hpp"
#include "bsvi/grids.hpp"
#include "bsvi/mkv.hpp"
#include "bsvi/model.hpp"
#include "bsvi/obstacle.hpp"

namespace bsvi {

enum class PviForm { Penalized, Prox };

// Space-time field u[m][j] on TimeGrid x SpaceGrid (all nodes incl. boundary).
struct FieldSolution {
    TimeGrid tgrid;
    SpaceGrid xgrid;
    std::vector<std::vector<double>> values;  // (M+1) x (J+2)
    std::vector<std::vector<double>> stderrs; // empty for the pde-oracle route
    std::string provenance;                   // "pde-oracle" or "probabilistic"

    double at(std::size_t m, std::size_t j) const { return values[m][j]; }
    // Linear interpolation in x at time node m, clamped to the box.
    double interp(std::size_t m, double x) const;
};

// Terminal row u(T, x_j) = (1/N) sum_i h(X_T^i, x_j). Values must land in
// Dom(phi) within 1e-8 when an obstacle is supplied.
std::vector<double> terminal_condition(const BaselineLaw& law, const DriverModel& driver,
                                       const SpaceGrid& grid, const ConvexObstacle& phi);

// One backward step: theta-implicit diffusion/drift via a tridiagonal solve
// with linear-extrapolation lateral boundaries, explicit nonlocal coupling
// through the cloud, then a nodewise implicit penalty (or prox) update.
std::vector<double> assemble_step(const BaselineLaw& law, const CoefficientModel& model,
                                  const DriverModel& driver, const ConvexObstacle& phi,
                                  const std::vector<double>& u_next, std::size_t m,
                                  const SpaceGrid& grid, double eps, double theta, PviForm form);

// Full backward march of the penalized / prox nonlocal PVI.
FieldSolution solve_pvi(const BaselineLaw& law, const CoefficientModel& model,
                        const DriverModel& driver, const ConvexObstacle& phi,
                        const TimeGrid& tgrid, const SpaceGrid& xgrid, double eps, PviForm form,
                        double theta = 1.0);

// Pointwise comparison of two fields at probe points (interior region only).
struct ProbeError {
    double t;
    double x;
    double a;
    double b;
    double err;
};
struct FieldErrorReport {
    double sup_err = 0.0;
    double l2_err = 0.0;
    std::vector<ProbeError> table;
};
struct Probe {
    double t;
    double x;
};
FieldErrorReport field_error(const FieldSolution& a, const FieldSolution& b,
                             const std::vector<Probe>& probes);

// Evaluates a field at (t, x) with linear interpolation in both variables.
double field_value(const FieldSolution& f, double t, double x);

}  // namespace bsvi
