#pragma once

#include <cstdint>
#include <cmath>

#include "darkgate/common.hpp"

namespace darkgate {

// Deterministic RNG for noise draws. std::normal_distribution's output
// sequence is implementation-defined, which would break byte-identical
// sweep reproduction, so the generator and the Gaussian transform are
// spelled out here.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-independent per-trial seed from (master seed, cell index, trial index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t trial) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s) ^ (0x632be59bd9b4e019ULL * (cell + 1));
    std::uint64_t b = a;
    return splitmix64(b) ^ (0x9e3779b97f4a7c15ULL * (trial + 1));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Uniform in (0, 1).
    double uniform() {
        std::uint64_t bits = splitmix64(state_);
        double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(splitmix64(state_) % span);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace darkgate
