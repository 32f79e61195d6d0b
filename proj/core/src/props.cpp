#include "bsvi/props.hpp"

#include <cmath>

#include "bsvi/rng.hpp"

namespace bsvi {

namespace {

struct Case {
    std::string name;
    ConvexObstacle phi;
    double tol;  // 1e-9 on closed-form prox paths, 1e-7 through the bisection
};

std::vector<Case> builtin_cases() {
    std::vector<Case> cs;
    cs.push_back({"zero", ConvexObstacle::zero(), 1e-9});
    cs.push_back({"indicator[0,inf)",
                  ConvexObstacle::indicator_interval(ExtReal(0.0), ExtReal::pos_inf()), 1e-9});
    cs.push_back({"indicator[-1,2]",
                  ConvexObstacle::indicator_interval(ExtReal(-1.0), ExtReal(2.0)), 1e-9});
    cs.push_back({"quadratic(0.7)", ConvexObstacle::quadratic(0.7), 1e-9});
    cs.push_back({"abs", ConvexObstacle::power_abs(1.0), 1e-9});
    cs.push_back({"square", ConvexObstacle::power_abs(2.0), 1e-9});
    cs.push_back({"pow1.5", ConvexObstacle::power_abs(1.5), 1e-7});
    cs.push_back({"piecewise", ConvexObstacle::piecewise_linear({-1.0, 0.0, 1.0},
                                                               {-2.0, -0.5, 0.5, 3.0}),
                  1e-9});
    cs.push_back({"cosh-1",
                  ConvexObstacle::custom([](double u) { return std::cosh(u) - 1.0; },
                                         [](double u) { return std::sinh(u); },
                                         ExtReal::neg_inf(), ExtReal::pos_inf()),
                  1e-7});
    return cs;
}

struct Tally {
    std::size_t failures = 0;
    double worst = 0.0;
    void note(double violation) {
        if (violation > 0.0) {
            ++failures;
            if (violation > worst) worst = violation;
        }
    }
};

}  // namespace

PropertySuiteResult run_property_suite(std::size_t n_samples, std::uint64_t seed) {
    PropertySuiteResult res;
    const std::uint64_t stream = 0x9d0f5u;

    for (const Case& c : builtin_cases()) {
        const ConvexObstacle& phi = c.phi;
        const double tol = c.tol;
        Tally t_i, t_ii, t_iii, t_iv, t_v, t_vi;

        for (std::size_t k = 0; k < n_samples; ++k) {
            const auto draw = [&](std::uint64_t lane) {
                return rng::uniform01(rng::counter_hash(seed, stream, k, lane));
            };
            const double u = -5.0 + 10.0 * draw(0);
            const double v = -5.0 + 10.0 * draw(1);
            const double eps = std::exp(std::log(1e-3) + std::log(1e3) * draw(2));
            const double del = std::exp(std::log(1e-3) + std::log(1e3) * draw(3));

            const double Ju = phi.resolvent(eps, u);
            const double Jv = phi.resolvent(eps, v);
            const double gu = phi.yosida_grad(eps, u);
            const double gv = phi.yosida_grad(eps, v);
            const double gdv = phi.yosida_grad(del, v);

            // i: monotone and 1/eps-Lipschitz gradient
            t_i.note(-(gu - gv) * (u - v) - tol * (1.0 + std::fabs(u - v) / eps));
            t_i.note(std::fabs(gu - gv) - std::fabs(u - v) / eps -
                     tol * (1.0 + 1.0 / eps));

            // ii: envelope decomposition and phi_eps <= phi
            const double env = phi.moreau_env(eps, u);
            const ExtReal phiJ = phi.eval(Ju);
            if (!phiJ.is_finite()) {
                t_ii.note(1.0);
            } else {
                const double decomp = (u - Ju) * (u - Ju) / (2.0 * eps) + phiJ.value();
                t_ii.note(std::fabs(env - decomp) - tol * (1.0 + std::fabs(env)));
            }
            const ExtReal phiu = phi.eval(u);
            if (phiu.is_finite())
                t_ii.note(env - phiu.value() - tol * (1.0 + std::fabs(phiu.value())));

            // iii: gradient is a subgradient at the resolvent point
            const SubgradientInterval sg = phi.subdiff_interval(Ju);
            if (sg.empty) {
                t_iii.note(1.0);
            } else {
                const double slack_tol = tol * (1.0 + std::fabs(gu)) / eps;
                double miss = 0.0;
                if (sg.lo.is_finite() && gu < sg.lo.value()) miss = sg.lo.value() - gu;
                if (sg.hi.is_finite() && gu > sg.hi.value())
                    miss = std::max(miss, gu - sg.hi.value());
                t_iii.note(miss - slack_tol);
            }

            // iv: resolvent nonexpansive
            t_iv.note(std::fabs(Ju - Jv) - std::fabs(u - v) - tol);

            // v: 0 <= phi_eps(u) <= grad * u
            t_v.note(-env - tol);
            t_v.note(env - gu * u - tol * (1.0 + std::fabs(gu * u)));

            // vi: cross-parameter monotonicity lower bound
            t_vi.note(-(gu - gdv) * (u - v) - (eps + del) * gu * gdv -
                      tol * (1.0 + std::fabs(gu * gdv)));
        }

        const auto push = [&](const char* item, const Tally& t) {
            res.items.push_back({c.name, item, n_samples, t.failures, t.worst, tol});
            if (t.failures > 0) res.pass = false;
        };
        push("i", t_i);
        push("ii", t_ii);
        push("iii", t_iii);
        push("iv", t_iv);
        push("v", t_v);
        push("vi", t_vi);
    }
    return res;
}

}  // namespace bsvi
