// Seeded sampling helpers. std::uniform_real_distribution is
// implementation-defined, so replay-stable streams map raw mt19937_64
// output to doubles directly.

#pragma once

#include <random>

namespace lipnav::rng {

/// Uniform double in [0, 1) from the top 53 bits.
inline double canonical(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + canonical(gen) * (hi - lo);
}

/// Uniform integer in [lo, hi]; bias is negligible for small ranges.
inline int uniform_int(std::mt19937_64& gen, int lo, int hi) {
    return lo + static_cast<int>(canonical(gen) * static_cast<double>(hi - lo + 1));
}

}  // namespace lipnav::rng
