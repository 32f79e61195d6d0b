#pragma once

#include <cstddef>

#include "bsvi/errors.hpp"

namespace bsvi {

// Uniform grid on [0, T] with M steps, nodes t_m = m T / M.
struct TimeGrid {
    double T = 1.0;
    std::size_t M = 1;

    TimeGrid() = default;
    TimeGrid(double horizon, std::size_t steps) : T(horizon), M(steps) {
        if (!(T > 0.0) || M < 1) throw ConfigError("TimeGrid: need T > 0 and M >= 1");
    }
    double h() const { return T / static_cast<double>(M); }
    double node(std::size_t m) const { return T * static_cast<double>(m) / static_cast<double>(M); }
};

// Spatial box [x_lo, x_hi] with J interior nodes; nodes x_j = x_lo + j dx,
// j = 0..J+1, dx = (x_hi - x_lo)/(J+1). Probe points for solver comparisons
// must stay inside the 20% interior margin.
struct SpaceGrid {
    double x_lo = -1.0;
    double x_hi = 1.0;
    std::size_t J = 8;

    SpaceGrid() = default;
    SpaceGrid(double lo, double hi, std::size_t interior) : x_lo(lo), x_hi(hi), J(interior) {
        if (!(x_lo < x_hi)) throw ConfigError("SpaceGrid: need x_lo < x_hi");
        if (J < 8) throw ConfigError("SpaceGrid: need J >= 8");
    }
    double dx() const { return (x_hi - x_lo) / static_cast<double>(J + 1); }
    std::size_t total_nodes() const { return J + 2; }
    double node(std::size_t j) const { return x_lo + dx() * static_cast<double>(j); }
    double margin_lo() const { return x_lo + 0.2 * (x_hi - x_lo); }
    double margin_hi() const { return x_hi - 0.2 * (x_hi - x_lo); }
    bool in_probe_region(double x) const { return x >= margin_lo() && x <= margin_hi(); }
};

}  // namespace bsvi
