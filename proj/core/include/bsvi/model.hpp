#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace bsvi {

// Forward coefficients b(t, x', x), sigma(t, x', x). The primed argument is
// the mean-field variable averaged over the baseline cloud.
//
// mean_affine: set when the dependence on x' is affine, so that averaging over
// the cloud is exactly evaluation at the cloud mean. This turns the O(N^2)
// interacting-particle step into O(N); the general path averages explicitly.
struct CoefficientModel {
    std::string name;
    std::function<double(double, double, double)> drift;      // b(t, x', x)
    std::function<double(double, double, double)> diffusion;  // sigma(t, x', x)
    bool mean_affine = false;
    std::optional<double> lipschitz_k;  // user-asserted (H5) constant
    std::optional<double> growth_c;     // user-asserted (H4) constant
};

// Backward data: driver f(t, x', x, y', y, z) and terminal h(x', x).
// mean_affine here refers to the primed slots (x', y') jointly.
struct DriverModel {
    std::string name;
    std::function<double(double, double, double, double, double, double)> f;
    std::function<double(double, double)> h;
    bool mean_affine = false;
    bool h_mean_affine = false;
    std::optional<double> lipschitz_c;   // (H6)(ii)
    bool monotone_in_yprime = false;     // (H6)(v)
};

// Spot-check the asserted (H5) Lipschitz constant on random sample pairs.
// Throws ConfigError on a violation beyond the stated slack.
void spot_check_lipschitz(const CoefficientModel& model, std::uint64_t seed, int samples = 256);
void spot_check_driver(const DriverModel& driver, std::uint64_t seed, int samples = 256);

}  // namespace bsvi
