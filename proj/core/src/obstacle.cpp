#include "bsvi/obstacle.hpp"

#include <algorithm>
#include <cmath>

#include "bsvi/errors.hpp"

namespace bsvi {

namespace {

constexpr double kNormTol = 1e-12;
constexpr int kMaxBisect = 200;

double clamp_ext(double u, ExtReal lo, ExtReal hi) {
    if (lo.is_finite() && u < lo.value()) return lo.value();
    if (hi.is_finite() && u > hi.value()) return hi.value();
    return u;
}

}  // namespace

double SubgradientInterval::selection() const {
    if (empty) throw Error("SubgradientInterval: selection() on empty interval");
    if (lo.is_finite() && hi.is_finite()) return 0.5 * (lo.value() + hi.value());
    if (lo.is_finite()) return std::max(lo.value(), 0.0);
    if (hi.is_finite()) return std::min(hi.value(), 0.0);
    return 0.0;
}

ConvexObstacle ConvexObstacle::zero() {
    ConvexObstacle o;
    o.kind_ = Kind::Zero;
    return o;
}

ConvexObstacle ConvexObstacle::indicator_interval(ExtReal a, ExtReal b) {
    if (b < a) throw InvalidObstacleError("indicator_interval: requires a <= b");
    if (a > ExtReal(0.0) || b < ExtReal(0.0))
        throw InvalidObstacleError("indicator_interval: 0 must lie in [a, b] ((A2))");
    ConvexObstacle o;
    o.kind_ = Kind::IndicatorInterval;
    o.dom_lo_ = a;
    o.dom_hi_ = b;
    return o;
}

ConvexObstacle ConvexObstacle::quadratic(double c) {
    if (!(c >= 0.0)) throw InvalidObstacleError("quadratic: c must be >= 0");
    ConvexObstacle o;
    o.kind_ = Kind::Quadratic;
    o.c_ = c;
    return o;
}

ConvexObstacle ConvexObstacle::power_abs(double p) {
    if (!(p >= 1.0)) throw InvalidObstacleError("power_abs: p must be >= 1");
    ConvexObstacle o;
    o.kind_ = Kind::PowerAbs;
    o.p_ = p;
    return o;
}

ConvexObstacle ConvexObstacle::piecewise_linear(std::vector<double> breaks,
                                                std::vector<double> slopes) {
    if (slopes.size() != breaks.size() + 1)
        throw InvalidObstacleError("piecewise_linear: need slopes.size() == breaks.size() + 1");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw InvalidObstacleError("piecewise_linear: breakpoints must be sorted");
    if (!std::is_sorted(slopes.begin(), slopes.end()))
        throw InvalidObstacleError("piecewise_linear: slopes must be nondecreasing (convexity)");
    ConvexObstacle o;
    o.kind_ = Kind::PiecewiseLinearConvex;
    o.breaks_ = std::move(breaks);
    o.slopes_ = std::move(slopes);
    // Minimum at 0: the subgradient interval at 0 must contain 0.
    SubgradientInterval at0 = o.subdiff_interval(0.0);
    if (!at0.contains(0.0))
        throw InvalidObstacleError("piecewise_linear: phi must attain its minimum 0 at 0 ((A2))");
    return o;
}

ConvexObstacle ConvexObstacle::custom(EvalOracle eval, SubgradOracle subgrad,
                                      ExtReal dom_lo, ExtReal dom_hi) {
    if (!eval || !subgrad) throw InvalidObstacleError("custom: both oracles are required");
    if (dom_hi < dom_lo || dom_lo > ExtReal(0.0) || dom_hi < ExtReal(0.0))
        throw InvalidObstacleError("custom: domain must be an interval containing 0");
    ConvexObstacle o;
    o.kind_ = Kind::Custom;
    o.eval_oracle_ = std::move(eval);
    o.subgrad_oracle_ = std::move(subgrad);
    o.dom_lo_ = dom_lo;
    o.dom_hi_ = dom_hi;
    o.validate_normalization();
    return o;
}

void ConvexObstacle::validate_normalization() const {
    const double f0 = eval_oracle_(0.0);
    if (std::isnan(f0)) throw InvalidObstacleError("custom: eval oracle returned NaN at 0");
    if (std::fabs(f0) > kNormTol)
        throw InvalidObstacleError("custom: phi(0) must equal 0 ((A2)); got " + std::to_string(f0));
    const double lo = clamp_ext(-10.0, dom_lo_, dom_hi_);
    const double hi = clamp_ext(10.0, dom_lo_, dom_hi_);
    const int n = 41;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        const double u = lo + (hi - lo) * i / (n - 1);
        vals[i] = eval_oracle_(u);
        if (std::isnan(vals[i]))
            throw InvalidObstacleError("custom: eval oracle returned NaN at " + std::to_string(u));
        if (vals[i] < -kNormTol)
            throw InvalidObstacleError("custom: phi must be nonnegative ((A2))");
    }
    // Sampled midpoint convexity.
    for (int i = 0; i + 2 < n; i += 2) {
        if (std::isfinite(vals[i]) && std::isfinite(vals[i + 2]) &&
            vals[i + 1] > 0.5 * (vals[i] + vals[i + 2]) + kNormTol)
            throw InvalidObstacleError("custom: sampled midpoint convexity violated");
    }
}

ExtReal ConvexObstacle::eval(double u) const {
    switch (kind_) {
        case Kind::Zero:
            return ExtReal(0.0);
        case Kind::IndicatorInterval:
            return in_domain(u) ? ExtReal(0.0) : ExtReal::pos_inf();
        case Kind::Quadratic:
            return ExtReal(0.5 * c_ * u * u);
        case Kind::PowerAbs:
            return ExtReal(std::pow(std::fabs(u), p_) / p_);
        case Kind::PiecewiseLinearConvex: {
            // Integrate the slopes from 0 to u; phi(0) = 0 exactly.
            double acc = 0.0;
            const auto piece_slope = [&](std::size_t k) { return slopes_[k]; };
            if (u >= 0.0) {
                double left = 0.0;
                for (std::size_t k = 0; k < slopes_.size(); ++k) {
                    const double plo = k == 0 ? -std::numeric_limits<double>::infinity() : breaks_[k - 1];
                    const double phi_hi = k == breaks_.size() ? std::numeric_limits<double>::infinity() : breaks_[k];
                    const double a = std::max(left, plo);
                    const double b = std::min(u, phi_hi);
                    if (b > a) acc += piece_slope(k) * (b - a);
                    left = std::max(left, phi_hi);
                    if (left >= u) break;
                }
            } else {
                double right = 0.0;
                for (std::size_t k = slopes_.size(); k-- > 0;) {
                    const double plo = k == 0 ? -std::numeric_limits<double>::infinity() : breaks_[k - 1];
                    const double phi_hi = k == breaks_.size() ? std::numeric_limits<double>::infinity() : breaks_[k];
                    const double b = std::min(right, phi_hi);
                    const double a = std::max(u, plo);
                    if (b > a) acc -= piece_slope(k) * (b - a);
                    right = std::min(right, plo);
                    if (right <= u) break;
                }
            }
            return ExtReal(acc);
        }
        case Kind::Custom: {
            if (!in_domain(u)) return ExtReal::pos_inf();
            const double v = eval_oracle_(u);
            if (std::isnan(v)) throw InvalidObstacleError("custom eval oracle returned NaN");
            if (std::isinf(v)) return ExtReal::pos_inf();
            return ExtReal(v);
        }
    }
    throw Error("unreachable obstacle kind");
}

SubgradientInterval ConvexObstacle::subdiff_interval(double u) const {
    switch (kind_) {
        case Kind::Zero:
            return {ExtReal(0.0), ExtReal(0.0)};
        case Kind::IndicatorInterval: {
            if (!in_domain(u)) return SubgradientInterval::make_empty();
            const bool at_lo = dom_lo_.is_finite() && u == dom_lo_.value();
            const bool at_hi = dom_hi_.is_finite() && u == dom_hi_.value();
            if (at_lo && at_hi) return {ExtReal::neg_inf(), ExtReal::pos_inf()};
            if (at_lo) return {ExtReal::neg_inf(), ExtReal(0.0)};
            if (at_hi) return {ExtReal(0.0), ExtReal::pos_inf()};
            return {ExtReal(0.0), ExtReal(0.0)};
        }
        case Kind::Quadratic:
            return {ExtReal(c_ * u), ExtReal(c_ * u)};
        case Kind::PowerAbs: {
            if (p_ == 1.0 && u == 0.0) return {ExtReal(-1.0), ExtReal(1.0)};
            const double g = (u == 0.0) ? 0.0
                                        : std::copysign(std::pow(std::fabs(u), p_ - 1.0), u);
            return {ExtReal(g), ExtReal(g)};
        }
        case Kind::PiecewiseLinearConvex: {
            // slopes_[k] applies on (breaks_[k-1], breaks_[k]).
            std::size_t k = std::upper_bound(breaks_.begin(), breaks_.end(), u) - breaks_.begin();
            if (k > 0 && breaks_[k - 1] == u)
                return {ExtReal(slopes_[k - 1]), ExtReal(slopes_[k])};
            return {ExtReal(slopes_[k]), ExtReal(slopes_[k])};
        }
        case Kind::Custom: {
            if (!in_domain(u)) return SubgradientInterval::make_empty();
            const double g = subgrad_oracle_(u);
            if (std::isnan(g)) throw InvalidObstacleError("custom subgradient oracle returned NaN");
            const bool at_lo = dom_lo_.is_finite() && u == dom_lo_.value();
            const bool at_hi = dom_hi_.is_finite() && u == dom_hi_.value();
            if (at_lo) return {ExtReal::neg_inf(), ExtReal(g)};
            if (at_hi) return {ExtReal(g), ExtReal::pos_inf()};
            return {ExtReal(g), ExtReal(g)};
        }
    }
    throw Error("unreachable obstacle kind");
}

double ConvexObstacle::resolvent(double eps, double u) const {
    if (!(eps > 0.0)) throw Error("resolvent: eps must be > 0");
    switch (kind_) {
        case Kind::Zero:
            return u;
        case Kind::IndicatorInterval:
            return clamp_ext(u, dom_lo_, dom_hi_);
        case Kind::Quadratic:
            return u / (1.0 + eps * c_);
        case Kind::PowerAbs:
            if (p_ == 1.0) {
                if (u > eps) return u - eps;
                if (u < -eps) return u + eps;
                return 0.0;
            }
            if (p_ == 2.0) return u / (1.0 + eps);
            return resolvent_numeric(eps, u);
        case Kind::PiecewiseLinearConvex: {
            const double inf = std::numeric_limits<double>::infinity();
            const std::size_t n = breaks_.size();
            for (std::size_t k = 0; k <= n; ++k) {
                const double lo = k == 0 ? -inf : breaks_[k - 1];
                const double hi = k == n ? inf : breaks_[k];
                const double cand = u - eps * slopes_[k];
                if (cand >= lo && cand <= hi) return cand;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (u >= breaks_[j] + eps * slopes_[j] && u <= breaks_[j] + eps * slopes_[j + 1])
                    return breaks_[j];
            }
            throw NumericProxError("piecewise_linear resolvent: no piece matched");
        }
        case Kind::Custom:
            return resolvent_numeric(eps, u);
    }
    throw Error("unreachable obstacle kind");
}

// Bisection on the strictly increasing residual r(v) = v - u + eps * s(v),
// s a measurable selection of d phi. Bracket grown geometrically inside Dom phi.
double ConvexObstacle::resolvent_numeric(double eps, double u) const {
    const auto sel = [&](double v) { return subdiff_interval(v).selection(); };
    const auto resid = [&](double v) { return v - u + eps * sel(v); };

    double lo = clamp_ext(u, dom_lo_, dom_hi_);
    double hi = lo;
    // If the clamped start already brackets via the domain edge, answer is there.
    double width = 1.0 + eps * std::fabs(sel(lo));
    for (int it = 0; it < 64; ++it) {
        lo = clamp_ext(u - width, dom_lo_, dom_hi_);
        hi = clamp_ext(u + width, dom_lo_, dom_hi_);
        const bool lo_ok = resid(lo) <= 0.0 || (dom_lo_.is_finite() && lo == dom_lo_.value());
        const bool hi_ok = resid(hi) >= 0.0 || (dom_hi_.is_finite() && hi == dom_hi_.value());
        if (lo_ok && hi_ok) break;
        width *= 2.0;
        if (it == 63)
            throw NumericProxError("resolvent: failed to bracket the prox root");
    }
    if (resid(lo) > 0.0) return lo;  // prox pinned at the lower domain edge
    if (resid(hi) < 0.0) return hi;  // prox pinned at the upper domain edge
    for (int it = 0; it < kMaxBisect && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (resid(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    if (hi - lo > 1e-9)
        throw NumericProxError("resolvent: bisection failed to converge");
    return 0.5 * (lo + hi);
}

double ConvexObstacle::moreau_env(double eps, double u) const {
    if (!(eps > 0.0)) throw Error("moreau_env: eps must be > 0");
    const double j = resolvent(eps, u);
    const ExtReal fj = eval(clamp_ext(j, dom_lo_, dom_hi_));
    const double d = u - j;
    return d * d / (2.0 * eps) + (fj.is_finite() ? fj.value() : 0.0);
}

double ConvexObstacle::yosida_grad(double eps, double u) const {
    if (!(eps > 0.0)) throw Error("yosida_grad: eps must be > 0");
    return (u - resolvent(eps, u)) / eps;
}

double ConvexObstacle::implicit_penalty_step(double eps, double h, double v) const {
    if (!(eps > 0.0) || !(h > 0.0)) throw Error("implicit_penalty_step: eps, h must be > 0");
    const double r = h / eps;
    switch (kind_) {
        case Kind::Zero:
            return v;
        case Kind::Quadratic:
            return v / (1.0 + h * c_ / (1.0 + eps * c_));
        case Kind::IndicatorInterval: {
            if (dom_lo_.is_finite() && v < dom_lo_.value())
                return (v + r * dom_lo_.value()) / (1.0 + r);
            if (dom_hi_.is_finite() && v > dom_hi_.value())
                return (v + r * dom_hi_.value()) / (1.0 + r);
            return v;
        }
        case Kind::PowerAbs:
            if (p_ == 2.0) return v / (1.0 + h / (1.0 + eps));
            if (p_ == 1.0) {
                if (std::fabs(v) <= eps + h) return v / (1.0 + r);
                return v - h * std::copysign(1.0, v);
            }
            break;
        default:
            break;
    }
    // Monotone residual g(y) = y + h * grad phi_eps(y) - v has slope in
    // [1, 1 + h/eps]; bracket growth cannot fail.
    const auto g = [&](double y) { return y + h * yosida_grad(eps, y) - v; };
    double width = 1.0 + h * std::fabs(yosida_grad(eps, v));
    double lo = v - width, hi = v + width;
    for (int it = 0; it < 64 && (g(lo) > 0.0 || g(hi) < 0.0); ++it) {
        width *= 2.0;
        lo = v - width;
        hi = v + width;
        if (it == 63) throw NumericProxError("implicit_penalty_step: bracket failure");
    }
    const double tol = 1e-13 * (1.0 + std::fabs(v)) / (1.0 + r);
    for (int it = 0; it < kMaxBisect && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::string ConvexObstacle::kind_name() const {
    switch (kind_) {
        case Kind::Zero: return "zero";
        case Kind::IndicatorInterval: return "indicator_interval";
        case Kind::Quadratic: return "quadratic";
        case Kind::PowerAbs: return "power_abs";
        case Kind::PiecewiseLinearConvex: return "piecewise_linear";
        case Kind::Custom: return "custom";
    }
    return "?";
}

}  // namespace bsvi
