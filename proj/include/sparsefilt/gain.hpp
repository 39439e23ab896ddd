#pragma once

#include <Eigen/Core>

#include "sparsefilt/signal.hpp"

namespace sparsefilt {

/// Parameters of the proportionate gain rule.
struct GainParams {
    double rho_g = 0.01;  // floor fraction of the largest tap magnitude, in (0, 1]
    double delta = 0.001;  // start-up floor so all-zero weights still adapt

    void validate() const;
};

/// Diagonal of the gain matrix: L strictly positive entries summing to 1.
using GainVector = Eigen::VectorXd;

/// Per-tap raw gains gamma_l = max(rho_g * max(delta, |w_0|, ..., |w_{L-1}|), |w_l|).
Eigen::VectorXd compute_gamma(const WeightVector& w, const GainParams& p);

/// Normalized gain diagonal g_l = gamma_l / sum_i gamma_i.
GainVector compute_gain(const WeightVector& w, const GainParams& p);

/// Elementwise square root of a gain diagonal.
Eigen::VectorXd gain_sqrt(const GainVector& g);

/// Elementwise reciprocal square root of a gain diagonal.
Eigen::VectorXd gain_inv_sqrt(const GainVector& g);

}  // namespace sparsefilt
