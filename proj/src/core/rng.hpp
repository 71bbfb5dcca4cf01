#pragma once

#include <cmath>
#include <cstdint>

namespace jumpwave {

// Counter-based generator: output i of stream s is a fixed hash of
// (seed, s, i), so any (seed, stream) pair yields an independent,
// reproducible sequence and partitioned work can derive substreams
// without coordination.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0xbf58476d1ce4e5b9ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on (0, 1): never returns 0 so log() stays finite.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * M_PI * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    // Knuth's product method; jump intensities here keep lambda*h small.
    int next_poisson(double mean) {
        if (mean <= 0.0) return 0;
        double limit = std::exp(-mean);
        int k = 0;
        double prod = next_uniform();
        while (prod > limit) {
            ++k;
            prod *= next_uniform();
        }
        return k;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace jumpwave
