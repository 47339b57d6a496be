#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sphuni {

/// Identifies one reproducible random stream: a master seed shared by a whole
/// run plus the index of the replication (or other unit of work) inside it.
/// Equal (master_seed, stream_index) pairs always yield identical draws.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream derivation: order-insensitive in stream_index, so
// replications can be generated in any order (or in parallel) and still
// reproduce bit-identical output.
inline std::uint64_t derive_stream_seed(const SeedSpec& seed) {
    const std::uint64_t a = mix64(seed.master_seed);
    const std::uint64_t b = mix64(seed.stream_index + 0x632be59bd9b4e019ULL);
    return mix64(a ^ b);
}

}  // namespace detail

/// Per-call random generator. Normal deviates use the Marsaglia polar method
/// on top of raw 53-bit uniforms, so the exact output sequence depends only on
/// SeedSpec, not on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(const SeedSpec& seed) : eng_(detail::derive_stream_seed(seed)) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sphuni
