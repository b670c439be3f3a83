#pragma once

#include <cmath>
#include <cstdint>

namespace stochlab {

// Deterministic, platform-independent generator (splitmix64 core).
// std::normal_distribution is implementation-defined, so sampling is done
// by hand to keep the seed -> stream contract portable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0,1), 53-bit, never exactly 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; caches the second deviate.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    // Standard Cauchy restricted to |x| <= cut, via inverse CDF of the
    // truncated law (so the density is the renormalized restriction).
    double cauchy_truncated(double gamma, double cut) {
        double a = std::atan(cut / gamma);
        double u = uniform01();
        return gamma * std::tan(a * (2.0 * u - 1.0));
    }

    // Documented shard-splitting rule: shard s of master seed m draws from
    // an independent stream seeded by one splitmix64 scramble of (m, s).
    static std::uint64_t shard_seed(std::uint64_t master, std::uint64_t shard) {
        std::uint64_t z = master ^ (0xD1B54A32D192ED03ull * (shard + 1));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace stochlab
