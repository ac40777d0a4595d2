#pragma once

#include <cstdint>
#include <random>

namespace rls {

/// Generator used by every stochastic step. One instance per run; results are
/// reproducible for a given seed within one build.
using Rng = std::mt19937_64;

inline int uniform_below(Rng& rng, int bound) {
    return std::uniform_int_distribution<int>(0, bound - 1)(rng);
}

inline double uniform_unit(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace rls
