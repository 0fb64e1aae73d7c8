#pragma once

#include <cstdint>
#include <random>

namespace helio {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent substream seed for (seed, a, b), e.g. one stream per walk,
// per tree, or per synthetic location. Streams with distinct (a, b) never
// collide in practice.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(seed) ^ splitmix64(a ^ 0x9e3779b97f4a7c15ULL) ^
                      splitmix64(b ^ 0xd1b54a32d192ed03ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(derive_seed(seed, a, b));
}

// Uniform double in [0, 1), 53-bit resolution. Used instead of
// std::uniform_real_distribution so draws are identical across platforms.
inline double canonical(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Lemire multiply-shift; avoids the
// implementation-defined behaviour of std::uniform_int_distribution.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// Approximate standard normal from 12 uniforms (Irwin-Hall). Fixed draw
// count keeps substreams aligned no matter which fields consume them.
inline double gauss01(Rng& rng) {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += canonical(rng);
    return s - 6.0;
}

}  // namespace helio
