#pragma once

#include <cstdint>

namespace cmatch {

// Stateless deterministic randomness.  Every draw is a pure function of the
// run seed plus a handful of salts (node id, round, counter), so the value a
// node draws does not depend on evaluation order or on how many other nodes
// exist.  splitmix64 is used as the mixer.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ 0x632be59bd9b4e019ULL) ^ splitmix64(b + 0x9e3779b97f4a7c15ULL);
}

// Keyed draw: hash of (seed, k1, k2, k3).
inline std::uint64_t draw64(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0,
                            std::uint64_t k3 = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ mix(k1, 0x1000001b3ULL));
    h = splitmix64(h ^ mix(k2, 0x100000001b3ULL));
    h = splitmix64(h ^ mix(k3, 0xcbf29ce484222325ULL));
    return h;
}

// Uniform value in [0, bound) by rejection; bound must be > 0.  Extra draws
// take successive counter values so the stream stays deterministic.
inline std::uint64_t draw_below(std::uint64_t seed, std::uint64_t bound, std::uint64_t k1,
                                std::uint64_t k2 = 0, std::uint64_t k3 = 0) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t salt = 0;
    for (;;) {
        std::uint64_t v = draw64(seed, k1, k2, k3 + (salt << 40));
        if (v < limit) return v % bound;
        ++salt;
    }
}

// Small sequential generator for places that want a stream (generators,
// shuffles).  Still fully determined by its seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xd6e8feb86659fd93ULL)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state_);
    }

    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        for (;;) {
            std::uint64_t v = next();
            if (v < limit) return v % bound;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t in(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace cmatch
