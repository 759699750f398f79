#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace daca {

/// Deterministic random source. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); all value mappings are done here
/// rather than through std::*_distribution, whose results vary across
/// standard libraries. Identical seeds give identical draws everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Box-Muller, no cached spare so every call consumes exactly two draws.
    double gaussian(double mean, double sigma) {
        double u1 = uniform();
        const double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * mag * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Knuth's multiplication method; fine for the small rates used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Seed for the (base_seed, stream_id, index) substream. Streams are
/// independent of evaluation order, so per-image / per-cell work can run
/// in any order or in parallel.
inline std::uint64_t substream_seed(std::uint64_t base_seed,
                                    std::string_view stream_id,
                                    std::uint64_t index) {
    std::uint64_t h = detail::splitmix64(base_seed);
    h = detail::splitmix64(h ^ detail::fnv1a(stream_id));
    return detail::splitmix64(h ^ index);
}

}  // namespace daca
