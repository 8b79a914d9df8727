#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ddwave/params.hpp"

namespace ddw::test {

inline constexpr std::uint64_t kSeed = 42;
inline constexpr int kDraws = 100;

/// Calls fn(p, r) on kDraws random valid parameter sets, each with a random
/// radius log-uniform on [1e-3, 1e3].
template <typename Fn>
void for_random_params(Fn&& fn, std::uint64_t seed = kSeed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> a_dist(0.5, 2.0), gap(0.1, 2.0), rho(0.0, 0.49), theta(0.51, 1.0),
        log_r(-3.0, 3.0);
    for (int k = 0; k < kDraws; ++k) {
        const double a = a_dist(rng);
        const ModelParams p = validate_params(a, a + gap(rng), rho(rng), theta(rng));
        fn(p, std::pow(10.0, log_r(rng)));
    }
}

}  // namespace ddw::test
