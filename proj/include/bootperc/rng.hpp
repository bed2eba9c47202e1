#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bootperc {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to turn (master seed, index path) tuples into
// well-separated stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream for (master, path...). Streams depend only on the index
// path, never on execution order or worker count, so parallel replications
// are reproducible.
inline Rng derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master ^ 0x8f1bbcdcbfa53e0bULL);
    for (std::uint64_t p : path)
        h = mix64(h ^ mix64(p + 0x2545f4914f6cdd1dULL));
    return Rng(h);
}

// Uniform double in [0,1) with 53-bit resolution. The std:: distributions are
// implementation-defined, so all sampling goes through these helpers to keep
// seeded runs bit-identical across standard libraries.
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform_real(rng) < p;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("uniform_below: empty range");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold)
            return r % n;
    }
}

// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i)
        std::swap(values[i - 1], values[uniform_below(rng, i)]);
}

}  // namespace bootperc
