#ifndef GEOMCONC_RNG_HPP
#define GEOMCONC_RNG_HPP

// Self-contained deterministic RNG stack. Every random quantity in the
// project is derived from a 64-bit master seed plus a stream index, so
// results are reproducible independent of thread count and platform RNG
// library differences.

#include <cmath>
#include <cstdint>

namespace geomconc {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stateless mix of (master seed, stream index) into an independent stream
// seed. Used to assign one RNG stream per replication / per MC chunk.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ 0xA0761D6478BD642FULL;
    s = splitmix64_next(s);
    s ^= stream * 0xE7037ED1A0B428DBULL + 0x8EBC6AF09C88C6E3ULL;
    return splitmix64_next(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }
    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(derive_seed(master, index));
    }

    // xoshiro256++
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

    // uniform in [0,1)
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // uniform in (0,1]; safe as a log() argument
    double u01_pos() { return 1.0 - u01(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    std::int64_t poisson(double mean);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

namespace detail {

// Knuth product method, fine for small means.
inline std::int64_t poisson_small(Rng& rng, double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
        p *= rng.u01_pos();
        ++k;
    } while (p > limit);
    return k - 1;
}

// Hoermann's PTRS transformed rejection, valid for mean >= 10.
inline std::int64_t poisson_ptrs(Rng& rng, double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.u01() - 0.5;
        const double v = rng.u01_pos();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::int64_t>(kf);
        }
    }
}

} // namespace detail

inline std::int64_t Rng::poisson(double mean) {
    if (!(mean >= 0.0)) return 0;
    if (mean == 0.0) return 0;
    if (mean < 10.0) return detail::poisson_small(*this, mean);
    return detail::poisson_ptrs(*this, mean);
}

} // namespace geomconc

#endif
