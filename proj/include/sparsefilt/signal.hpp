#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "sparsefilt/rng.hpp"

namespace sparsefilt {

using WeightVector = Eigen::VectorXd;

/// Seed for the deterministic generators below. Same seed, same parameters,
/// bit-identical output.
struct RngSeed {
    std::uint64_t value = 0;
};

/// Sparse impulse response: L tap weights, most of them zero.
struct SparseSystem {
    WeightVector weights;
    std::vector<int> active_indices;  // positions with weights[i] != 0, ascending

    int length() const { return static_cast<int>(weights.size()); }
};

/// A finite stretch of a scalar signal.
struct SignalBuffer {
    Eigen::VectorXd samples;
    double nominal_variance = 0.0;

    int size() const { return static_cast<int>(samples.size()); }
};

/// Build an L-tap system from explicit (index, value) placements; all other
/// taps are zero. Throws std::invalid_argument on out-of-range or duplicate
/// indices.
SparseSystem gen_sparse_system(int length, const std::vector<std::pair<int, double>>& taps);

/// Bundled default layout for the 512-tap benchmark system: a contiguous
/// 37-tap active region holding three dominant reflections (0.9, 0.1, -0.05)
/// over a bed of low-level (+-1e-3) leakage taps.
const std::vector<std::pair<int, double>>& default_active_taps();

/// i.i.d. zero-mean Gaussian samples with the given variance.
SignalBuffer gen_white_gaussian(int n, double variance, RngSeed seed);

/// First-order autoregressive process x(k) = pole * x(k-1) + u(k) with
/// Gaussian innovations, started from rest (x(-1) = 0). pole = 0 reproduces
/// gen_white_gaussian bit-for-bit under the same seed.
SignalBuffer gen_ar1(int n, double pole, double innovation_variance, RngSeed seed);

/// Observed response d(n) = w^T x(n) + v(n), where the regressor uses a zero
/// pre-window (samples before index 0 read as zero).
SignalBuffer system_output(const SparseSystem& system, const SignalBuffer& input,
                           const SignalBuffer& noise);

}  // namespace sparsefilt
