// Deterministic seeded random generation. splitmix64 plus Box-Muller is used
// instead of <random> distributions so that identical seeds give bit-identical
// streams across standard-library implementations.
#pragma once

#include <cmath>
#include <cstdint>

#include "csisense/types.hpp"

namespace csisense {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Standard normal via Box-Muller; generates pairs, caches the second.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx unit_phasor() { return std::polar(1.0, uniform(0.0, 2.0 * kPi)); }

    /// Independent per-task seed derived from a master seed.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
        Rng r(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        r.next_u64();
        return r.next_u64();
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace csisense
