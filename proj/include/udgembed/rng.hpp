#pragma once

#include <cstdint>
#include <random>

namespace udg {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Decorrelated child seed for stream `stream` of a base seed. Used so that
// restarts, samples and workers draw from independent deterministic streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x632be59bd9b4e019ULL * (stream + 1));
    return splitmix64(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

} // namespace udg
