#pragma once

#include <cstdint>
#include <random>

namespace forgecurve {

// splitmix64 finalizer, used to derive decorrelated sub-seeds from a run seed
// plus a stream tag (task id, phase id, ...). Keeps every randomized phase of
// a run on its own deterministic stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ splitmix64(tag + 0x632be59bd9b4e019ull));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t tag) {
    return std::mt19937_64(mix_seed(seed, tag));
}

}  // namespace forgecurve
