#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsvi/obstacle.hpp"

namespace bsvi {

// Randomized property suite for the Moreau envelope / resolvent / Yosida
// gradient identities, run over every built-in obstacle shape plus a smooth
// code-only one. Items:
//   i   gradient monotone and 1/eps-Lipschitz
//   ii  envelope decomposition phi_eps(u) = |u - J u|^2/(2 eps) + phi(J u),
//       and phi_eps(u) <= phi(u)
//   iii grad phi_eps(u) lies in the subdifferential at J_eps(u)
//   iv  resolvent nonexpansive
//   v   0 <= phi_eps(u) <= <grad phi_eps(u), u>
//   vi  cross-parameter monotonicity lower bound
struct PropertyItemResult {
    std::string obstacle;
    std::string item;
    std::size_t samples = 0;
    std::size_t failures = 0;
    double worst = 0.0;  // largest violation seen, 0 when clean
    double tol = 0.0;
    bool pass() const { return failures == 0; }
};

struct PropertySuiteResult {
    std::vector<PropertyItemResult> items;
    bool pass = true;
};

PropertySuiteResult run_property_suite(std::size_t n_samples, std::uint64_t seed);

}  // namespace bsvi
