#include "sparsefilt/signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace sparsefilt {

SparseSystem gen_sparse_system(int length, const std::vector<std::pair<int, double>>& taps) {
    if (length < 1) throw std::invalid_argument("gen_sparse_system: length must be >= 1");
    SparseSystem sys;
    sys.weights = WeightVector::Zero(length);
    std::set<int> seen;
    for (const auto& [idx, value] : taps) {
        if (idx < 0 || idx >= length)
            throw std::invalid_argument("gen_sparse_system: tap index " + std::to_string(idx) +
                                        " out of range [0, " + std::to_string(length) + ")");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("gen_sparse_system: duplicate tap index " +
                                        std::to_string(idx));
        sys.weights[idx] = value;
    }
    for (int i = 0; i < length; ++i)
        if (sys.weights[i] != 0.0) sys.active_indices.push_back(i);
    return sys;
}

const std::vector<std::pair<int, double>>& default_active_taps() {
    static const std::vector<std::pair<int, double>> taps = [] {
        std::vector<std::pair<int, double>> t;
        // Active region spans taps 31..67: three dominant reflections plus
        // 34 leakage taps at -59 dB relative to the main one.
        for (int i = 31; i <= 67; ++i) {
            if (i == 37)
                t.emplace_back(i, 0.9);
            else if (i == 55)
                t.emplace_back(i, 0.1);
            else if (i == 67)
                t.emplace_back(i, -0.05);
            else
                t.emplace_back(i, (i % 2 == 0) ? 1e-3 : -1e-3);
        }
        return t;
    }();
    return taps;
}

SignalBuffer gen_white_gaussian(int n, double variance, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("gen_white_gaussian: n must be >= 1");
    if (variance < 0.0) throw std::invalid_argument("gen_white_gaussian: variance must be >= 0");
    Rng rng(seed.value);
    const double scale = std::sqrt(variance);
    SignalBuffer buf;
    buf.samples.resize(n);
    for (int i = 0; i < n; ++i) buf.samples[i] = scale * rng.gauss();
    buf.nominal_variance = variance;
    return buf;
}

SignalBuffer gen_ar1(int n, double pole, double innovation_variance, RngSeed seed) {
    if (n < 1) throw std::invalid_argument("gen_ar1: n must be >= 1");
    if (innovation_variance < 0.0)
        throw std::invalid_argument("gen_ar1: innovation variance must be >= 0");
    if (!(std::abs(pole) < 1.0)) throw std::invalid_argument("gen_ar1: |pole| must be < 1");
    Rng rng(seed.value);
    const double scale = std::sqrt(innovation_variance);
    SignalBuffer buf;
    buf.samples.resize(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        prev = pole * prev + scale * rng.gauss();
        buf.samples[i] = prev;
    }
    buf.nominal_variance = innovation_variance / (1.0 - pole * pole);
    return buf;
}

SignalBuffer system_output(const SparseSystem& system, const SignalBuffer& input,
                           const SignalBuffer& noise) {
    if (input.size() != noise.size())
        throw std::invalid_argument("system_output: input and noise lengths differ");
    const int n = input.size();
    SignalBuffer out;
    out.samples.resize(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int idx : system.active_indices) {
            if (idx > k) break;  // zero pre-window
            acc += system.weights[idx] * input.samples[k - idx];
        }
        out.samples[k] = acc + noise.samples[k];
    }
    out.nominal_variance = 0.0;
    return out;
}

}  // namespace sparsefilt
