#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bsvi {

// Least-squares fit of E[target | state] on the polynomial basis
// {1, z, ..., z^degree} in the standardized state z = (x - mean)/scale,
// optionally augmented with one extra feature g(x) (standardized the same
// way). With a (near-)constant state the conditional expectation degenerates
// to the plain mean, which is what the predictor returns in that case.
class PolyPredictor {
  public:
    double operator()(double x) const;

    double mean_ = 0.0;
    double scale_ = 1.0;
    std::vector<double> coeffs_;  // in the standardized variable

    std::function<double(double)> extra_;  // empty when unused
    double extra_mean_ = 0.0;
    double extra_scale_ = 1.0;
    double extra_coeff_ = 0.0;
};

// Longstaff-Schwartz style conditional-expectation regression.
// Throws DegenerateRegressionError when the normal equations are rank
// deficient and ridge == 0.
PolyPredictor regress_condexp(std::span<const double> state, std::span<const double> target,
                              int degree, double ridge,
                              const std::function<double(double)>& extra = {});

}  // namespace bsvi
