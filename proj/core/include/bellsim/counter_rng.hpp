// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace bellsim {

// SplitMix64 finalizer (Steele/Lea/Vigna).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based 64-bit word: the (counter+1)-th output of a SplitMix64
/// stream seeded with `seed`. Stateless, so round outcomes do not depend
/// on how rounds are sharded across workers.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

/// Uniform double in [0, 1), 53 mantissa bits.
inline double uniform_unit(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(counter_word(seed, counter) >> 11) * 0x1.0p-53;
}

}  // namespace bellsim
