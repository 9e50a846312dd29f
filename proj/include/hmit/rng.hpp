#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace hmit {

// Deterministic 64-bit generator (splitmix64). The standard <random>
// distributions are implementation-defined, so every sampling decision in
// the toolkit goes through this class to keep corruption masks and
// benchmark runs bit-stable across compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Lemire multiply-shift; n must be > 0.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (one value per call, the pair's
    // second half is discarded to keep the stream position predictable).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return __builtin_sqrt(-2.0 * __builtin_log(u1)) * __builtin_cos(6.283185307179586 * u2);
    }

    bool chance(double prob) { return uniform() < prob; }

private:
    uint64_t state_;
};

// Stable seed derivation for named substreams, e.g. one per sweep run.
// FNV-1a over the parent seed and a label.
inline uint64_t derive_seed(uint64_t parent, std::string_view label) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<uint8_t>(parent >> (8 * i)));
    for (char c : label) mix(static_cast<uint8_t>(c));
    return h;
}

inline uint64_t derive_seed(uint64_t parent, uint64_t index) {
    Rng r(parent ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return r.next();
}

}  // namespace hmit
