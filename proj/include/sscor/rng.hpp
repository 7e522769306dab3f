#pragma once

#include <cmath>
#include <cstdint>

namespace sscor::rng {

/// SplitMix64 step; also used as the avalanche mixer for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-dependent 64-bit combine built on the SplitMix64 finalizer. Used to
/// derive replication stream ids from cell parameters; fully platform-stable.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ 0x2545f4914f6cdd1dULL;
    (void)splitmix64(s);
    s ^= b;
    return splitmix64(s);
}

/// Deterministic per-replication random stream: xoshiro256++ seeded from
/// (master_seed, stream_id) through SplitMix64. Distinct stream ids give
/// statistically independent sequences; the consumption order of every
/// sampler below is fixed, so output is bit-identical across runs, platforms
/// and thread counts.
class Stream {
public:
    Stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t seed = mix(master_seed, stream_id);
        for (auto& word : s_) word = splitmix64(seed);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform draw on the open interval (0,1): 53-bit mantissa, zero rejected.
    double next_unit() {
        for (;;) {
            double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    /// Standard normal via the Marsaglia polar method (the spare deviate of
    /// each accepted pair is cached).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    /// Gamma(shape, scale=1) via Marsaglia–Tsang (2000); shapes below one use
    /// the boost gamma(a) = gamma(a+1) * U^(1/a).
    double next_gamma(double shape) {
        if (shape < 1.0)
            return next_gamma(shape + 1.0) * std::pow(next_unit(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_unit();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d - d * v + d * std::log(v)) return d * v;
        }
    }

    /// Chi-square with nu > 0 degrees of freedom.
    double next_chisq(double nu) { return 2.0 * next_gamma(0.5 * nu); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sscor::rng
