#pragma once

#include <cstdint>

namespace bsvi {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, step, index, lane), so simulations are reproducible
// independently of scheduling and thread count.
namespace rng {

inline constexpr std::uint64_t kBaselineStream = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t step, std::uint64_t index,
                                  std::uint64_t lane = 0) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ stream);
    h = mix64(h ^ step);
    h = mix64(h ^ index);
    h = mix64(h ^ lane);
    return h;
}

// Uniform on the open interval (0, 1).
inline double uniform01(std::uint64_t bits) {
    // 52 bits: both endpoints (2^-53 and 1 - 2^-53) are exactly representable,
    // so the result never rounds to 0 or 1
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double inv_normal_cdf(double p);

inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                     std::uint64_t index, std::uint64_t lane = 0) {
    return inv_normal_cdf(uniform01(counter_hash(seed, stream, step, index, lane)));
}

// Stream id for a conditional simulation anchored at (t-node, x); kept
// disjoint from kBaselineStream by the leading salt.
std::uint64_t conditional_stream(std::uint64_t t_index, double x);

}  // namespace rng
}  // namespace bsvi
