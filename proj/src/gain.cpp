#include "sparsefilt/gain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsefilt {

void GainParams::validate() const {
    if (!(rho_g > 0.0) || !(rho_g <= 1.0))
        throw std::invalid_argument("GainParams: rho_g must be in (0, 1]");
    if (!(delta > 0.0)) throw std::invalid_argument("GainParams: delta must be > 0");
}

Eigen::VectorXd compute_gamma(const WeightVector& w, const GainParams& p) {
    p.validate();
    const int n = static_cast<int>(w.size());
    if (n < 1) throw std::invalid_argument("compute_gamma: empty weight vector");
    const double max_mag = w.cwiseAbs().maxCoeff();
    const double floor = p.rho_g * std::max(p.delta, max_mag);
    Eigen::VectorXd gamma(n);
    for (int i = 0; i < n; ++i) gamma[i] = std::max(floor, std::abs(w[i]));
    return gamma;
}

GainVector compute_gain(const WeightVector& w, const GainParams& p) {
    Eigen::VectorXd gamma = compute_gamma(w, p);
    double total = 0.0;
    for (int i = 0; i < gamma.size(); ++i) total += gamma[i];
    return gamma / total;
}

Eigen::VectorXd gain_sqrt(const GainVector& g) {
    if ((g.array() <= 0.0).any())
        throw std::invalid_argument("gain_sqrt: gain entries must be strictly positive");
    return g.array().sqrt();
}

Eigen::VectorXd gain_inv_sqrt(const GainVector& g) {
    if ((g.array() <= 0.0).any())
        throw std::invalid_argument("gain_inv_sqrt: gain entries must be strictly positive");
    return g.array().rsqrt();
}

}  // namespace sparsefilt
