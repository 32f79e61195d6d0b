#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsvi/extended_real.hpp"

namespace bsvi {

// Closed interval of subgradients [phi'_-(u), phi'_+(u)]; empty when the
// subdifferential at u is empty (u outside Dom(d phi)).
struct SubgradientInterval {
    ExtReal lo;
    ExtReal hi;
    bool empty = false;

    static SubgradientInterval make_empty() { return {ExtReal(0.0), ExtReal(0.0), true}; }
    bool contains(double g) const {
        return !empty && lo <= ExtReal(g) && ExtReal(g) <= hi;
    }
    // A measurable selection: the midpoint, clamped to a finite representative
    // when one side is infinite.
    double selection() const;
};

// A proper convex lower-semicontinuous obstacle phi: R -> [0, +inf] with
// phi(0) = 0. Construction validates normalization; evaluation, subgradients,
// resolvent (prox), Moreau envelope and Yosida gradient are all exposed.
//
// Closed-form paths cover Zero / IndicatorInterval / Quadratic / PowerAbs
// p in {1,2} / PiecewiseLinearConvex; PowerAbs with other exponents and
// Custom obstacles go through a monotone bisection.
class ConvexObstacle {
  public:
    enum class Kind { Zero, IndicatorInterval, Quadratic, PowerAbs, PiecewiseLinearConvex, Custom };

    using EvalOracle = std::function<double(double)>;
    using SubgradOracle = std::function<double(double)>;  // monotone selection of d phi

    static ConvexObstacle zero();
    // Indicator of [a, b] (extended endpoints allowed); requires 0 in [a, b].
    static ConvexObstacle indicator_interval(ExtReal a, ExtReal b);
    // phi(y) = c y^2 / 2, c >= 0.
    static ConvexObstacle quadratic(double c);
    // phi(y) = |y|^p / p, p >= 1.
    static ConvexObstacle power_abs(double p);
    // Piecewise linear convex: slopes[k] on (breaks[k-1], breaks[k]) with
    // nondecreasing slopes; slopes.size() == breaks.size() + 1. Must attain
    // its minimum 0 at 0.
    static ConvexObstacle piecewise_linear(std::vector<double> breaks, std::vector<double> slopes);
    // Code-only obstacle from oracles over the given (finite or infinite) domain.
    static ConvexObstacle custom(EvalOracle eval, SubgradOracle subgrad,
                                 ExtReal dom_lo, ExtReal dom_hi);

    Kind kind() const { return kind_; }
    ExtReal domain_lo() const { return dom_lo_; }
    ExtReal domain_hi() const { return dom_hi_; }
    bool in_domain(double u) const {
        return dom_lo_ <= ExtReal(u) && ExtReal(u) <= dom_hi_;
    }

    // phi(u); +inf outside the domain. eval(0) == 0 exactly.
    ExtReal eval(double u) const;

    // [phi'_-(u), phi'_+(u)], empty when d phi(u) is empty.
    SubgradientInterval subdiff_interval(double u) const;

    // J_eps(u) = (I + eps d phi)^{-1}(u), the prox of eps*phi.
    double resolvent(double eps, double u) const;

    // phi_eps(u) = inf_v { |u-v|^2/(2 eps) + phi(v) }.
    double moreau_env(double eps, double u) const;

    // grad phi_eps(u) = (u - J_eps(u)) / eps, an element of d phi(J_eps(u)).
    double yosida_grad(double eps, double u) const;

    // Solves y + h * yosida_grad(eps, y) = v (backward-Euler penalty sub-step;
    // the residual is strictly increasing in y).
    double implicit_penalty_step(double eps, double h, double v) const;

    // Parameters, exposed for serialization.
    double quadratic_c() const { return c_; }
    double power_p() const { return p_; }
    const std::vector<double>& pl_breaks() const { return breaks_; }
    const std::vector<double>& pl_slopes() const { return slopes_; }

    std::string kind_name() const;

  private:
    ConvexObstacle() = default;
    void validate_normalization() const;
    double resolvent_numeric(double eps, double u) const;

    Kind kind_ = Kind::Zero;
    ExtReal dom_lo_ = ExtReal::neg_inf();
    ExtReal dom_hi_ = ExtReal::pos_inf();
    double c_ = 0.0;  // Quadratic
    double p_ = 2.0;  // PowerAbs
    std::vector<double> breaks_;
    std::vector<double> slopes_;
    EvalOracle eval_oracle_;
    SubgradOracle subgrad_oracle_;
};

}  // namespace bsvi
