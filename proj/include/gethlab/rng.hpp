#pragma once

#include <cstdint>
#include <random>

namespace gethlab::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent stream for work item `index` under `seed`; identical under any schedule.
inline Engine stream(std::uint64_t seed, std::uint64_t index, std::uint64_t domain = 0) {
    return Engine(splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (domain * 0xD1B54A32D192ED03ULL)));
}

}  // namespace gethlab::rng
