#include "sparsefilt/verify.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sparsefilt/filters.hpp"
#include "sparsefilt/rng.hpp"
#include "sparsefilt/signal.hpp"
#include "sparsefilt/theory.hpp"

namespace sparsefilt {

namespace {

bool report(std::ostream& out, const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << "\n";
    return ok;
}

bool identical(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a.data()[i] != b.data()[i]) return false;
    return true;
}

FilterConfig base_config(Algorithm alg) {
    FilterConfig cfg;
    cfg.algorithm = alg;
    cfg.mu = 0.7;
    cfg.delta_p = 0.01;
    cfg.rho = 1e-4;
    cfg.epsilon = 10.0;
    return cfg;
}

}  // namespace

bool verify_reductions(std::ostream& out) {
    bool all = true;
    for (int length : {4, 64}) {
        const int steps = 1000;
        const SignalBuffer input = gen_white_gaussian(steps, 1.0, RngSeed{2024});
        const SignalBuffer desired = gen_white_gaussian(steps, 2.0, RngSeed{77});
        const RecordPolicy every{1};

        FilterConfig za = base_config(Algorithm::ZA_PNLMS);
        za.rho = 0.0;
        FilterConfig pn = base_config(Algorithm::PNLMS);
        const RunRecord r_za = run_filter(za, length, input, desired, every);
        const RunRecord r_pn = run_filter(pn, length, input, desired, every);
        all &= report(out, "za_pnlms(rho=0) == pnlms",
                      identical(r_za.snapshots, r_pn.snapshots),
                      "1000-step trajectories, L=" + std::to_string(length));

        FilterConfig rza = base_config(Algorithm::RZA_PNLMS);
        rza.epsilon = 0.0;
        FilterConfig za_full = base_config(Algorithm::ZA_PNLMS);
        const RunRecord r_rza = run_filter(rza, length, input, desired, every);
        const RunRecord r_za_full = run_filter(za_full, length, input, desired, every);
        all &= report(out, "rza_pnlms(eps=0) == za_pnlms",
                      identical(r_rza.snapshots, r_za_full.snapshots),
                      "1000-step trajectories, L=" + std::to_string(length));

        FilterConfig uni = base_config(Algorithm::PNLMS);
        uni.force_uniform_gain = true;
        FilterConfig nl = base_config(Algorithm::NLMS);
        nl.delta_p = uni.delta_p * length;  // uniform gain rescales the regularizer by L
        const RunRecord r_uni = run_filter(uni, length, input, desired, every);
        const RunRecord r_nl = run_filter(nl, length, input, desired, every);
        all &= report(out, "pnlms(uniform gain) == nlms(delta_p * L)",
                      identical(r_uni.snapshots, r_nl.snapshots),
                      "1000-step trajectories, L=" + std::to_string(length));
    }
    return all;
}

bool verify_transform(std::ostream& out) {
    Rng rng(4242);
    double worst = 0.0;
    int cases = 0;
    for (int length : {2, 8, 64}) {
        FilterConfig cfg = base_config(Algorithm::ZA_PNLMS);
        for (int k = 0; k < 3400; ++k) {
            WeightVector w(length);
            Eigen::VectorXd x(length);
            for (int i = 0; i < length; ++i) {
                // Mix exact zeros into the weights so sgn(0) paths are hit.
                w[i] = (rng.uniform() < 0.3) ? 0.0 : 2.0 * rng.gauss();
                x[i] = rng.gauss();
            }
            const double d = rng.gauss();
            worst = std::max(worst, transform_step_check(w, x, d, cfg));
            ++cases;
        }
    }
    std::ostringstream detail;
    detail << cases << " random instances, max relative discrepancy " << std::scientific
           << std::setprecision(3) << worst;
    bool all = report(out, "transform route matches direct route", worst <= 1e-12, detail.str());

    // rho = 0 reduces to the plain proportionate transform model.
    FilterConfig cfg = base_config(Algorithm::ZA_PNLMS);
    cfg.rho = 0.0;
    double worst0 = 0.0;
    for (int k = 0; k < 1000; ++k) {
        WeightVector w(8);
        Eigen::VectorXd x(8);
        for (int i = 0; i < 8; ++i) {
            w[i] = rng.gauss();
            x[i] = rng.gauss();
        }
        worst0 = std::max(worst0, transform_step_check(w, x, rng.gauss(), cfg));
    }
    all &= report(out, "transform route matches with rho = 0", worst0 <= 1e-12,
                  "1000 random instances");
    return all;
}

bool verify_discretization(std::ostream& out) {
    bool all = true;
    const int length = 8;
    const int draws = 1000000;

    const auto check_model = [&](const Eigen::MatrixXd& R, const std::string& label) {
        const CovarianceModel model = CovarianceModel::from_covariance(R);
        AngularSampler sampler(model, NormSource::gaussian(model), RngSeed{99});
        Eigen::MatrixXd second = Eigen::MatrixXd::Zero(length, length);
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(length);
        for (int k = 0; k < draws; ++k) {
            const Eigen::VectorXd x = sampler.draw();
            second.selfadjointView<Eigen::Lower>().rankUpdate(x, 1.0);
            mean += x;
        }
        second /= static_cast<double>(draws);
        second.triangularView<Eigen::StrictlyUpper>() = second.transpose();
        mean /= static_cast<double>(draws);

        const double frob = (second - R).norm() / R.norm();
        std::ostringstream detail;
        detail << "relative Frobenius error " << std::scientific << std::setprecision(3) << frob;
        all &= report(out, "second moment matches R (" + label + ")", frob <= 0.02, detail.str());

        const double mean_bound = 5.0 * std::sqrt(R.diagonal().maxCoeff() / draws);
        all &= report(out, "sample mean vanishes (" + label + ")",
                      mean.cwiseAbs().maxCoeff() <= mean_bound, "zero within noise bands");
    };

    check_model(Eigen::MatrixXd::Identity(length, length), "white");
    check_model(ar1_covariance(length, 0.5, 0.75), "ar1");

    {
        // Direction matrix of white Gaussian vectors is isotropic.
        Rng rng(5150);
        Eigen::MatrixXd samples(length, draws);
        for (int c = 0; c < draws; ++c)
            for (int r = 0; r < length; ++r) samples(r, c) = rng.gauss();
        const Eigen::MatrixXd b = estimate_B(samples);
        const double err =
            (b - Eigen::MatrixXd::Identity(length, length) / length).cwiseAbs().maxCoeff();
        std::ostringstream detail;
        detail << "max entry error " << std::scientific << std::setprecision(3) << err;
        all &= report(out, "estimate_B(white) == I/L", err <= 0.003, detail.str());
        all &= report(out, "estimate_B has unit trace", std::abs(b.trace() - 1.0) <= 1e-12,
                      "exact up to rounding");
    }
    {
        // Under the discretized model the direction matrix is S / Tr(S).
        const Eigen::MatrixXd S = ar1_covariance(length, 0.5, 1.0);
        const CovarianceModel model = CovarianceModel::from_covariance(S);
        const Eigen::MatrixXd samples =
            angular_discretize_batch(model, NormSource::gaussian(model), draws, RngSeed{314});
        const Eigen::MatrixXd b = estimate_B(samples);
        const double err = (b - S / S.trace()).cwiseAbs().maxCoeff();
        std::ostringstream detail;
        detail << "max entry error " << std::scientific << std::setprecision(3) << err;
        all &= report(out, "estimate_B(discretized) == S/Tr(S)", err <= 0.003, detail.str());
    }
    return all;
}

bool verify_projection(std::ostream& out) {
    bool all = true;
    {
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.37);
        const GainVector g = Eigen::VectorXd::Ones(1);
        const WeightVector w = Eigen::VectorXd::Constant(1, -2.0);
        const double r = projection_residual(x, g, w);
        all &= report(out, "residual is 1 for a single tap", std::abs(r - 1.0) <= 1e-12,
                      "dropped term is never negligible at L = 1");
    }
    {
        const WeightVector w = WeightVector::Zero(4);
        const Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
        const GainVector g = Eigen::VectorXd::Constant(4, 0.25);
        all &= report(out, "residual is 0 for all-zero weights",
                      projection_residual(x, g, w) == 0.0, "sgn(0) = 0");
    }
    {
        const int length = 512;
        Rng rng(8080);
        const GainVector g = Eigen::VectorXd::Constant(length, 1.0 / length);
        WeightVector w(length);
        for (int i = 0; i < length; ++i) w[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
        double acc = 0.0;
        const int draws = 10000;
        Eigen::VectorXd x(length);
        for (int k = 0; k < draws; ++k) {
            for (int i = 0; i < length; ++i) x[i] = rng.gauss();
            acc += projection_residual(x, g, w);
        }
        const double mean = acc / draws;
        std::ostringstream detail;
        detail << "mean residual " << std::scientific << std::setprecision(3) << mean << " over "
               << draws << " draws";
        all &= report(out, "residual is small at L = 512", mean <= 0.15, detail.str());
    }
    return all;
}

bool run_verify_suite(const std::string& name, std::ostream& out) {
    if (name == "reductions") return verify_reductions(out);
    if (name == "transform") return verify_transform(out);
    if (name == "discretization") return verify_discretization(out);
    if (name == "projection") return verify_projection(out);
    throw std::invalid_argument("unknown verify suite: " + name);
}

}  // namespace sparsefilt
