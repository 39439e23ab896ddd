#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace sparsefilt {

/// Deterministic random stream, layout v1: MT19937-64 engine, uniforms from
/// the top 53 bits, normals via the Marsaglia polar method with one cached
/// spare. Identical seeds reproduce identical sequences on every build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double v1 = 0.0, v2 = 0.0, s = 0.0;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        have_spare_ = true;
        return v1 * f;
    }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// SplitMix64 finalizer over (key, stream); derives decorrelated child seeds
/// so e.g. input and noise streams of one trial never overlap.
inline std::uint64_t derive_seed(std::uint64_t key, std::uint64_t stream) {
    std::uint64_t z = key + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(key, a), b);
}

}  // namespace sparsefilt
