#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sparsefilt/filters.hpp"
#include "sparsefilt/gain.hpp"
#include "sparsefilt/signal.hpp"

#include "json.hpp"

namespace sparsefilt {

/// Input correlation matrix together with its eigendecomposition.
struct CovarianceModel {
    Eigen::MatrixXd R;
    Eigen::VectorXd eigenvalues;   // ascending, clamped at zero
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, same order

    int length() const { return static_cast<int>(R.rows()); }

    /// Decompose a symmetric positive semidefinite matrix. Throws
    /// std::invalid_argument if R is not symmetric PSD or the
    /// reconstruction/orthonormality checks fail.
    static CovarianceModel from_covariance(const Eigen::MatrixXd& R);
};

/// Stationary covariance of a first-order autoregressive input:
/// R_ij = innovation_variance * pole^|i-j| / (1 - pole^2).
Eigen::MatrixXd ar1_covariance(int length, double pole, double innovation_variance);

/// Distribution the radial factor r = ||x|| is drawn from.
struct NormSource {
    enum class Kind { GaussianChi, Resampled };
    Kind kind = Kind::GaussianChi;
    Eigen::VectorXd sqrt_eigenvalues;  // GaussianChi
    Eigen::VectorXd recorded;          // Resampled

    /// Norm distribution implied by a Gaussian vector with the model's covariance.
    static NormSource gaussian(const CovarianceModel& model);
    /// Resample from recorded ||x(n)|| values.
    static NormSource resampled(Eigen::VectorXd recorded_norms);

    double draw(Rng& rng) const;
};

/// Draws x = s * r * v, where v is one of the covariance eigenvectors picked
/// with probability lambda_i / Tr(R), s = +-1 equiprobably, and r comes from
/// the norm source; the three factors are independent. Matches E[x] = 0 and
/// E[x x^T] = R.
class AngularSampler {
public:
    AngularSampler(const CovarianceModel& model, NormSource norm_source, RngSeed seed);

    Eigen::VectorXd draw();

private:
    const CovarianceModel& model_;
    NormSource norm_source_;
    Eigen::VectorXd cumulative_;  // running sums of the direction probabilities
    Rng rng_;
};

/// Convenience batch of angular draws, one sample per column.
Eigen::MatrixXd angular_discretize_batch(const CovarianceModel& model, const NormSource& norm,
                                         int count, RngSeed seed);

/// Empirical mean of s s^T / (s^T s) over the sample columns; zero columns are
/// skipped. Symmetric with unit trace.
Eigen::MatrixXd estimate_B(const Eigen::MatrixXd& samples);

/// Computes one zero-attracting proportionate update two ways: directly, and
/// through the transform-domain detour s = G^{1/2} x, w_N = G^{-1/2} w. The
/// two routes are algebraically identical; returns the largest elementwise
/// deviation relative to the largest weight magnitude.
double transform_step_check(const WeightVector& w, const Eigen::VectorXd& x, double d,
                            const FilterConfig& cfg);

/// Deterministic steady-gain estimate: the gain rule evaluated at the true
/// system weights.
GainVector predict_steady_gain(const SparseSystem& system, const GainParams& p);

/// Monte-Carlo alternative: average the gain diagonal over the tail of
/// adaptive runs against white input.
GainVector simulated_steady_gain(const SparseSystem& system, const FilterConfig& cfg,
                                 double sigma_x2, double sigma_v2, long iterations, int trials,
                                 double window_fraction, RngSeed seed);

/// Steady-state mean prediction bundle.
struct SteadyStateReport {
    WeightVector predicted_mean;
    WeightVector predicted_bias;  // w_opt - predicted_mean
    GainVector steady_gain;
    Eigen::MatrixXd s_matrix;

    nlohmann::json to_json() const;
    static SteadyStateReport from_json(const nlohmann::json& j);
};

/// White-input steady-state mean: active taps settle short of their optimum
/// by (rho/mu) / gbar_i toward the origin, inactive taps are unbiased.
/// Requires mu in (0, 2); otherwise throws std::domain_error.
SteadyStateReport predict_bias(const SparseSystem& system, const GainParams& p, double rho,
                               double mu, double sigma_x2 = 1.0);

/// General-covariance steady-state mean:
///   wbar = w_opt - (rho/mu) Tr(S) diag(sqrt(gbar)) S^{-1} (sign_expectation ./ sqrt(gbar)).
/// The caller supplies S(inf), the steady gain expectations and the per-tap
/// sign expectations (defaults: sign of w_opt on active taps, 0 elsewhere).
WeightVector predict_mean_general(const SparseSystem& system, const Eigen::MatrixXd& s_inf,
                                  const GainVector& gain_expectations, double rho, double mu,
                                  const Eigen::VectorXd& sign_expectation);

/// Default sign expectations: sgn(w_opt), which is zero on inactive taps.
Eigen::VectorXd default_sign_expectation(const SparseSystem& system);

/// Deterministic approximation of S(inf) = E[G^{1/2} R G^{1/2}] with the gain
/// frozen at its steady estimate.
Eigen::MatrixXd steady_s_matrix(const SparseSystem& system, const GainParams& p,
                                const Eigen::MatrixXd& R);

/// Relative size of the data-dependent projection term that the
/// zero-attractor update drops: ||(x x^T G / x^T G x) sgn(w)|| / ||sgn(w)||.
double projection_residual(const Eigen::VectorXd& x, const GainVector& g, const WeightVector& w);

enum class MuStability { kStable, kOutsideBound };

/// First-order stability of the mean recursion: stable iff 0 < mu < 2.
MuStability check_mu_stability(double mu);

}  // namespace sparsefilt
