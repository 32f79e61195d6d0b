#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bsvi/grids.hpp"
#include "bsvi/model.hpp"

namespace bsvi {

// N particle trajectories on a TimeGrid. X[m][i] for m = 0..M, i = 0..N-1;
// dW[m][i] are the N(0, h) increments used on step m, reproducible from
// (seed, stream, m, i).
struct ParticleCloud {
    TimeGrid grid;
    std::size_t N = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<std::vector<double>> X;   // (M+1) x N
    std::vector<std::vector<double>> dW;  // M x N

    std::span<const double> slice(std::size_t m) const { return X.at(m); }
};

// Frozen empirical law of the baseline X^{0,x0}; immutable after construction.
class BaselineLaw {
  public:
    explicit BaselineLaw(ParticleCloud cloud) : cloud_(std::move(cloud)) {}

    const ParticleCloud& cloud() const { return cloud_; }
    const TimeGrid& grid() const { return cloud_.grid; }
    std::size_t particles() const { return cloud_.N; }
    std::span<const double> slice(std::size_t m) const { return cloud_.slice(m); }
    double slice_mean(std::size_t m) const;

  private:
    ParticleCloud cloud_;
};

// Interacting-particle Euler-Maruyama for the baseline McKean-Vlasov SDE.
BaselineLaw simulate_baseline(const CoefficientModel& model, double x0, const TimeGrid& grid,
                              std::size_t N, std::uint64_t seed);

// Empirical mean-field coefficients at node m and state x:
// bbar = (1/N) sum_j b(t_m, X_j, x), and likewise sigma.
struct MeanCoeffs {
    double b;
    double sigma;
};
MeanCoeffs mean_coeffs(const BaselineLaw& law, const CoefficientModel& model,
                       std::size_t t_index, double x);

// K non-interacting Euler paths of X^{t,x} from node t_start, driven by the
// frozen law. Row p holds path p on nodes m = t_start..M (index m - t_start).
struct ConditionalPaths {
    std::size_t t_start = 0;
    double x = 0.0;
    TimeGrid grid;
    std::vector<std::vector<double>> X;   // K x (M - t_start + 1)
    std::vector<std::vector<double>> dW;  // K x (M - t_start)
};
ConditionalPaths simulate_conditional(const BaselineLaw& law, const CoefficientModel& model,
                                      std::size_t t_start, double x, std::size_t K,
                                      std::uint64_t seed);

// Empirical E[sup_{s<=T} |X_s|^p] over the cloud.
double moment_check(const ParticleCloud& cloud, double p);

}  // namespace bsvi
