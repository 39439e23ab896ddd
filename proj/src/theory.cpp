#include "sparsefilt/theory.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace sparsefilt {

CovarianceModel CovarianceModel::from_covariance(const Eigen::MatrixXd& R) {
    if (R.rows() != R.cols() || R.rows() < 1)
        throw std::invalid_argument("CovarianceModel: R must be square and non-empty");
    const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
    if (((R - R.transpose()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
        throw std::invalid_argument("CovarianceModel: R must be symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(R);
    if (solver.info() != Eigen::Success)
        throw std::invalid_argument("CovarianceModel: eigendecomposition failed");

    CovarianceModel model;
    model.R = R;
    model.eigenvalues = solver.eigenvalues();
    model.eigenvectors = solver.eigenvectors();
    if (model.eigenvalues.minCoeff() < -1e-10 * scale)
        throw std::invalid_argument("CovarianceModel: R is not positive semidefinite");
    model.eigenvalues = model.eigenvalues.cwiseMax(0.0);

    const int n = model.length();
    const Eigen::MatrixXd recon = model.eigenvectors *
                                  model.eigenvalues.asDiagonal() * model.eigenvectors.transpose();
    if ((recon - R).norm() > 1e-10 * std::max(1.0, R.norm()))
        throw std::invalid_argument("CovarianceModel: reconstruction check failed");
    const Eigen::MatrixXd gram =
        model.eigenvectors.transpose() * model.eigenvectors - Eigen::MatrixXd::Identity(n, n);
    if (gram.cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("CovarianceModel: eigenvectors are not orthonormal");
    return model;
}

Eigen::MatrixXd ar1_covariance(int length, double pole, double innovation_variance) {
    if (length < 1) throw std::invalid_argument("ar1_covariance: length must be >= 1");
    if (!(std::abs(pole) < 1.0)) throw std::invalid_argument("ar1_covariance: |pole| must be < 1");
    if (innovation_variance < 0.0)
        throw std::invalid_argument("ar1_covariance: innovation variance must be >= 0");
    const double v0 = innovation_variance / (1.0 - pole * pole);
    Eigen::MatrixXd R(length, length);
    for (int i = 0; i < length; ++i)
        for (int j = 0; j < length; ++j) R(i, j) = v0 * std::pow(pole, std::abs(i - j));
    return R;
}

NormSource NormSource::gaussian(const CovarianceModel& model) {
    NormSource s;
    s.kind = Kind::GaussianChi;
    s.sqrt_eigenvalues = model.eigenvalues.cwiseSqrt();
    return s;
}

NormSource NormSource::resampled(Eigen::VectorXd recorded_norms) {
    if (recorded_norms.size() == 0)
        throw std::invalid_argument("NormSource: no recorded norms to resample");
    NormSource s;
    s.kind = Kind::Resampled;
    s.recorded = std::move(recorded_norms);
    return s;
}

double NormSource::draw(Rng& rng) const {
    if (kind == Kind::Resampled) {
        const auto n = recorded.size();
        auto idx = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
        if (idx >= n) idx = n - 1;
        return recorded[idx];
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < sqrt_eigenvalues.size(); ++i) {
        const double z = sqrt_eigenvalues[i] * rng.gauss();
        sum += z * z;
    }
    return std::sqrt(sum);
}

AngularSampler::AngularSampler(const CovarianceModel& model, NormSource norm_source, RngSeed seed)
    : model_(model), norm_source_(std::move(norm_source)), rng_(seed.value) {
    const double trace = model.eigenvalues.sum();
    if (!(trace > 0.0)) throw std::invalid_argument("AngularSampler: covariance has zero trace");
    cumulative_.resize(model.eigenvalues.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
        acc += model.eigenvalues[i] / trace;
        cumulative_[i] = acc;
    }
    cumulative_[cumulative_.size() - 1] = 1.0;
}

Eigen::VectorXd AngularSampler::draw() {
    const double u = rng_.uniform();
    const double* begin = cumulative_.data();
    const double* end = begin + cumulative_.size();
    const auto idx = static_cast<Eigen::Index>(std::upper_bound(begin, end, u) - begin);
    const double sign = rng_.uniform() < 0.5 ? -1.0 : 1.0;
    const double r = norm_source_.draw(rng_);
    return (sign * r) * model_.eigenvectors.col(std::min(idx, cumulative_.size() - 1));
}

Eigen::MatrixXd angular_discretize_batch(const CovarianceModel& model, const NormSource& norm,
                                         int count, RngSeed seed) {
    if (count < 1) throw std::invalid_argument("angular_discretize_batch: count must be >= 1");
    AngularSampler sampler(model, norm, seed);
    Eigen::MatrixXd out(model.length(), count);
    for (int i = 0; i < count; ++i) out.col(i) = sampler.draw();
    return out;
}

Eigen::MatrixXd estimate_B(const Eigen::MatrixXd& samples) {
    const auto L = samples.rows();
    if (L < 1) throw std::invalid_argument("estimate_B: empty samples");
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(L, L);
    long used = 0;
    for (Eigen::Index c = 0; c < samples.cols(); ++c) {
        const auto s = samples.col(c);
        const double n2 = s.squaredNorm();
        if (n2 == 0.0) continue;
        acc.selfadjointView<Eigen::Lower>().rankUpdate(s, 1.0 / n2);
        ++used;
    }
    if (used == 0) throw std::invalid_argument("estimate_B: all samples are zero");
    acc /= static_cast<double>(used);
    acc.triangularView<Eigen::StrictlyUpper>() = acc.transpose();
    return acc;
}

double transform_step_check(const WeightVector& w, const Eigen::VectorXd& x, double d,
                            const FilterConfig& cfg) {
    cfg.validate();
    if (x.size() != w.size())
        throw std::invalid_argument("transform_step_check: length mismatch");
    const GainVector g = compute_gain(w, cfg.gain_params);
    if ((g.array() <= 0.0).any())
        throw std::invalid_argument("transform_step_check: zero gain element");

    const Eigen::VectorXd sgn = w.unaryExpr([](double v) {
        return (v > 0.0) ? 1.0 : (v < 0.0) ? -1.0 : 0.0;
    });

    // Route 1: the update in the original coordinates.
    const double e = d - w.dot(x);
    const Eigen::VectorXd gx = g.cwiseProduct(x);
    const double denom = x.dot(gx) + cfg.delta_p;
    const Eigen::VectorXd direct = w + (cfg.mu * e / denom) * gx - cfg.rho * sgn;

    // Route 2: through s = G^{1/2} x, w_N = G^{-1/2} w, then back.
    const Eigen::VectorXd root = gain_sqrt(g);
    const Eigen::VectorXd inv_root = gain_inv_sqrt(g);
    const Eigen::VectorXd s = root.cwiseProduct(x);
    const Eigen::VectorXd w_n = inv_root.cwiseProduct(w);
    const double e_n = d - w_n.dot(s);
    const double denom_n = s.dot(s) + cfg.delta_p;
    const Eigen::VectorXd w_n_next =
        w_n + (cfg.mu * e_n / denom_n) * s - cfg.rho * inv_root.cwiseProduct(sgn);
    const Eigen::VectorXd transformed = root.cwiseProduct(w_n_next);

    const double scale = std::max({direct.cwiseAbs().maxCoeff(),
                                   transformed.cwiseAbs().maxCoeff(),
                                   std::numeric_limits<double>::min()});
    return (direct - transformed).cwiseAbs().maxCoeff() / scale;
}

GainVector predict_steady_gain(const SparseSystem& system, const GainParams& p) {
    return compute_gain(system.weights, p);
}

GainVector simulated_steady_gain(const SparseSystem& system, const FilterConfig& cfg,
                                 double sigma_x2, double sigma_v2, long iterations, int trials,
                                 double window_fraction, RngSeed seed) {
    cfg.validate();
    if (cfg.algorithm == Algorithm::NLMS)
        throw std::invalid_argument("simulated_steady_gain: NLMS carries no gain diagonal");
    if (iterations < 1 || trials < 1)
        throw std::invalid_argument("simulated_steady_gain: iterations and trials must be >= 1");
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("simulated_steady_gain: window fraction must be in (0, 1]");
    const int L = system.length();
    const long window_start = iterations - static_cast<long>(window_fraction * iterations);

    Eigen::VectorXd gain_sum = Eigen::VectorXd::Zero(L);
    long gain_count = 0;
    for (int t = 0; t < trials; ++t) {
        const SignalBuffer input = gen_white_gaussian(
            static_cast<int>(iterations), sigma_x2, RngSeed{derive_seed(seed.value, t, 1)});
        const SignalBuffer noise = gen_white_gaussian(
            static_cast<int>(iterations), sigma_v2, RngSeed{derive_seed(seed.value, t, 2)});
        const SignalBuffer desired = system_output(system, input, noise);

        Eigen::VectorXd w = WeightVector::Zero(L);
        Eigen::VectorXd regressor = Eigen::VectorXd::Zero(L);
        detail::StepWorkspace ws;
        for (long n = 0; n < iterations; ++n) {
            if (L > 1)
                std::memmove(regressor.data() + 1, regressor.data(),
                             sizeof(double) * static_cast<std::size_t>(L - 1));
            regressor[0] = input.samples[n];
            detail::step_in_place(w, regressor.data(), desired.samples[n], cfg, ws, nullptr);
            if (n >= window_start) {
                gain_sum += ws.gain;
                ++gain_count;
            }
        }
    }
    if (gain_count == 0) throw std::invalid_argument("simulated_steady_gain: empty tail window");
    return gain_sum / static_cast<double>(gain_count);
}

nlohmann::json SteadyStateReport::to_json() const {
    auto vec = [](const Eigen::VectorXd& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    nlohmann::json j;
    j["predicted_mean"] = vec(predicted_mean);
    j["predicted_bias"] = vec(predicted_bias);
    j["steady_gain"] = vec(steady_gain);
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < s_matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < s_matrix.cols(); ++k) row.push_back(s_matrix(i, k));
        rows.push_back(std::move(row));
    }
    j["s_matrix"] = std::move(rows);
    return j;
}

SteadyStateReport SteadyStateReport::from_json(const nlohmann::json& j) {
    auto vec = [](const nlohmann::json& a) {
        Eigen::VectorXd v(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
        return v;
    };
    SteadyStateReport r;
    r.predicted_mean = vec(j.at("predicted_mean"));
    r.predicted_bias = vec(j.at("predicted_bias"));
    r.steady_gain = vec(j.at("steady_gain"));
    const auto& rows = j.at("s_matrix");
    r.s_matrix.resize(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            r.s_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                rows[i][k].get<double>();
    return r;
}

SteadyStateReport predict_bias(const SparseSystem& system, const GainParams& p, double rho,
                               double mu, double sigma_x2) {
    if (check_mu_stability(mu) != MuStability::kStable)
        throw std::domain_error("predict_bias: mu outside the stable range (0, 2)");
    if (!(rho >= 0.0)) throw std::invalid_argument("predict_bias: rho must be >= 0");

    SteadyStateReport report;
    report.steady_gain = predict_steady_gain(system, p);
    const int L = system.length();
    report.predicted_bias = WeightVector::Zero(L);
    for (int idx : system.active_indices) {
        const double sgn = system.weights[idx] > 0.0 ? 1.0 : -1.0;
        report.predicted_bias[idx] = (rho / mu) / report.steady_gain[idx] * sgn;
    }
    report.predicted_mean = system.weights - report.predicted_bias;
    report.s_matrix = Eigen::MatrixXd(sigma_x2 * report.steady_gain.asDiagonal());
    return report;
}

WeightVector predict_mean_general(const SparseSystem& system, const Eigen::MatrixXd& s_inf,
                                  const GainVector& gain_expectations, double rho, double mu,
                                  const Eigen::VectorXd& sign_expectation) {
    if (check_mu_stability(mu) != MuStability::kStable)
        throw std::domain_error("predict_mean_general: mu outside the stable range (0, 2)");
    const int L = system.length();
    if (s_inf.rows() != L || s_inf.cols() != L)
        throw std::invalid_argument("predict_mean_general: S size mismatch");
    if (gain_expectations.size() != L || sign_expectation.size() != L)
        throw std::invalid_argument("predict_mean_general: vector size mismatch");
    if ((gain_expectations.array() <= 0.0).any())
        throw std::invalid_argument("predict_mean_general: gain expectations must be positive");
    const double scale = std::max(1.0, s_inf.cwiseAbs().maxCoeff());
    if ((s_inf - s_inf.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("predict_mean_general: S must be symmetric");

    Eigen::LLT<Eigen::MatrixXd> llt(s_inf);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("predict_mean_general: S is singular or not positive definite");

    const Eigen::VectorXd root = gain_expectations.cwiseSqrt();
    const Eigen::VectorXd z = sign_expectation.cwiseQuotient(root);
    const Eigen::VectorXd solved = llt.solve(z);
    const double trace = s_inf.trace();
    return system.weights - (rho / mu) * trace * root.cwiseProduct(solved);
}

Eigen::VectorXd default_sign_expectation(const SparseSystem& system) {
    return system.weights.unaryExpr(
        [](double v) { return (v > 0.0) ? 1.0 : (v < 0.0) ? -1.0 : 0.0; });
}

Eigen::MatrixXd steady_s_matrix(const SparseSystem& system, const GainParams& p,
                                const Eigen::MatrixXd& R) {
    if (R.rows() != system.length() || R.cols() != system.length())
        throw std::invalid_argument("steady_s_matrix: R size mismatch");
    const Eigen::VectorXd root = gain_sqrt(predict_steady_gain(system, p));
    return root.asDiagonal() * R * root.asDiagonal();
}

double projection_residual(const Eigen::VectorXd& x, const GainVector& g, const WeightVector& w) {
    if (x.size() != g.size() || x.size() != w.size())
        throw std::invalid_argument("projection_residual: length mismatch");
    if (x.squaredNorm() == 0.0)
        throw std::invalid_argument("projection_residual: zero regressor");
    const Eigen::VectorXd sgn = w.unaryExpr([](double v) {
        return (v > 0.0) ? 1.0 : (v < 0.0) ? -1.0 : 0.0;
    });
    const double sgn_norm = sgn.norm();
    if (sgn_norm == 0.0) return 0.0;
    const Eigen::VectorXd gx = g.cwiseProduct(x);
    const double denom = x.dot(gx);
    const double scalar = gx.dot(sgn) / denom;
    return std::abs(scalar) * x.norm() / sgn_norm;
}

MuStability check_mu_stability(double mu) {
    return (mu > 0.0 && mu < 2.0) ? MuStability::kStable : MuStability::kOutsideBound;
}

}  // namespace sparsefilt
