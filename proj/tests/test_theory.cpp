#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "equal_util.hpp"
#include "sparsefilt/harness.hpp"
#include "sparsefilt/theory.hpp"

using namespace sparsefilt;

namespace {

const GainParams kGain{0.01, 0.001};

FilterConfig za_config(double mu = 0.7, double rho = 1e-4) {
    FilterConfig cfg;
    cfg.algorithm = Algorithm::ZA_PNLMS;
    cfg.mu = mu;
    cfg.rho = rho;
    cfg.delta_p = 0.01;
    cfg.gain_params = kGain;
    cfg.epsilon = 10.0;
    return cfg;
}

}  // namespace

TEST_CASE("covariance model invariants") {
    const Eigen::MatrixXd R = ar1_covariance(8, 0.5, 0.75);
    CHECK(R(0, 0) == doctest::Approx(1.0));
    CHECK(R(0, 1) == doctest::Approx(0.5));
    const CovarianceModel model = CovarianceModel::from_covariance(R);
    const Eigen::MatrixXd recon = model.eigenvectors * model.eigenvalues.asDiagonal() *
                                  model.eigenvectors.transpose();
    CHECK((recon - R).norm() <= 1e-10 * R.norm());
    const Eigen::MatrixXd gram = model.eigenvectors.transpose() * model.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(model.eigenvalues.minCoeff() >= 0.0);

    Eigen::MatrixXd asym = R;
    asym(0, 7) += 1.0;
    CHECK_THROWS_AS(CovarianceModel::from_covariance(asym), std::invalid_argument);

    Eigen::MatrixXd indef = -Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(CovarianceModel::from_covariance(indef), std::invalid_argument);
}

TEST_CASE("transform route is an exact rewrite of the direct update") {
    Rng rng(606);
    for (int length : {2, 8, 64}) {
        const FilterConfig cfg = za_config();
        double worst = 0.0;
        for (int k = 0; k < 300; ++k) {
            WeightVector w(length);
            Eigen::VectorXd x(length);
            for (int i = 0; i < length; ++i) {
                w[i] = (rng.uniform() < 0.3) ? 0.0 : 2.0 * rng.gauss();
                x[i] = rng.gauss();
            }
            worst = std::max(worst, transform_step_check(w, x, rng.gauss(), cfg));
        }
        CHECK(worst <= 1e-12);
    }

    // rho = 0 and the uniform-gain start are covered by the same contract.
    const FilterConfig no_attractor = za_config(0.7, 0.0);
    Eigen::VectorXd x(8);
    Rng rng2(607);
    for (int i = 0; i < 8; ++i) x[i] = rng2.gauss();
    CHECK(transform_step_check(WeightVector::Zero(8), x, 1.0, no_attractor) <= 1e-12);
    CHECK(transform_step_check(WeightVector::Zero(8), x, 1.0, za_config()) <= 1e-12);
}

TEST_CASE("angular sampler aligns with eigdirections and matches first moments") {
    const Eigen::MatrixXd R = 2.0 * Eigen::MatrixXd::Identity(4, 4);
    const CovarianceModel model = CovarianceModel::from_covariance(R);
    // Equal eigenvalues: every direction has probability 1/L.
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(model.eigenvalues[i] / model.eigenvalues.sum() == doctest::Approx(0.25));

    AngularSampler sampler(model, NormSource::gaussian(model), RngSeed{8});
    for (int k = 0; k < 50; ++k) {
        const Eigen::VectorXd x = sampler.draw();
        // Each draw lies along exactly one eigenvector.
        int nonzero = 0;
        for (Eigen::Index i = 0; i < 4; ++i)
            if (std::abs(x[i]) > 1e-14) ++nonzero;
        CHECK(nonzero == 1);
    }

    const int draws = 100000;
    const CovarianceModel colored = CovarianceModel::from_covariance(ar1_covariance(8, 0.5, 0.75));
    AngularSampler cs(colored, NormSource::gaussian(colored), RngSeed{9});
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
    for (int k = 0; k < draws; ++k) mean += cs.draw();
    mean /= draws;
    CHECK(mean.cwiseAbs().maxCoeff() <=
          4.0 * std::sqrt(colored.R.diagonal().maxCoeff() / draws) * 2.0);
}

TEST_CASE("angular sampler second moment approaches R") {
    const CovarianceModel model = CovarianceModel::from_covariance(ar1_covariance(8, 0.5, 0.75));
    const Eigen::MatrixXd samples =
        angular_discretize_batch(model, NormSource::gaussian(model), 200000, RngSeed{10});
    const Eigen::MatrixXd second = samples * samples.transpose() / samples.cols();
    CHECK((second - model.R).norm() / model.R.norm() <= 0.04);
}

TEST_CASE("resampled norm source reuses recorded radii") {
    const CovarianceModel model =
        CovarianceModel::from_covariance(Eigen::MatrixXd::Identity(3, 3));
    Eigen::VectorXd recorded(2);
    recorded << 2.0, 5.0;
    AngularSampler sampler(model, NormSource::resampled(recorded), RngSeed{11});
    for (int k = 0; k < 20; ++k) {
        const double r = sampler.draw().norm();
        CHECK((r == doctest::Approx(2.0) || r == doctest::Approx(5.0)));
    }
    CHECK_THROWS_AS(NormSource::resampled(Eigen::VectorXd()), std::invalid_argument);

    const CovarianceModel degenerate =
        CovarianceModel::from_covariance(Eigen::MatrixXd::Zero(3, 3));
    CHECK_THROWS_AS(AngularSampler(degenerate, NormSource::gaussian(degenerate), RngSeed{1}),
                    std::invalid_argument);
}

TEST_CASE("estimate_B basics") {
    Eigen::MatrixXd one(2, 1);
    one << 1.0, 0.0;
    const Eigen::MatrixXd b1 = estimate_B(one);
    CHECK(b1(0, 0) == 1.0);
    CHECK(b1(0, 1) == 0.0);
    CHECK(b1(1, 0) == 0.0);
    CHECK(b1(1, 1) == 0.0);

    // Zero columns are skipped.
    Eigen::MatrixXd with_zero(2, 2);
    with_zero << 1.0, 0.0, 0.0, 0.0;
    CHECK(same_values(estimate_B(with_zero), b1));
    CHECK_THROWS_AS(estimate_B(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);

    Rng rng(303);
    Eigen::MatrixXd samples(8, 20000);
    for (Eigen::Index c = 0; c < samples.cols(); ++c)
        for (int r = 0; r < 8; ++r) samples(r, c) = rng.gauss();
    const Eigen::MatrixXd b = estimate_B(samples);
    CHECK(std::abs(b.trace() - 1.0) <= 1e-12);
    CHECK(same_values(b, b.transpose()));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("predict_steady_gain hand cases") {
    const SparseSystem sys = gen_sparse_system(4, {{0, 1.0}});
    const GainVector g = predict_steady_gain(sys, kGain);
    CHECK(g[0] == 1.0 / 1.03);
    CHECK(g[1] == doctest::Approx(0.009709).epsilon(1e-4));

    const SparseSystem zero = gen_sparse_system(5, {});
    CHECK(same_values(predict_steady_gain(zero, kGain), Eigen::VectorXd::Constant(5, 0.2)));
}

TEST_CASE("simulation-tail gain matches the deterministic estimate on active taps") {
    const SparseSystem sys = gen_sparse_system(512, default_active_taps());
    // Operating point where every dominant tap survives the attractor.
    const GainVector sim =
        simulated_steady_gain(sys, za_config(0.7, 2e-5), 1.0, 1e-3, 6000, 2, 0.25, RngSeed{11});
    const GainVector det = predict_steady_gain(sys, kGain);
    for (int idx : {37, 55, 67})
        CHECK(std::abs(sim[idx] / det[idx] - 1.0) <= 0.2);
}

TEST_CASE("white-input bias prediction") {
    SUBCASE("no attractor, no bias") {
        const SparseSystem sys = gen_sparse_system(8, {{2, 0.4}, {5, -0.7}});
        const SteadyStateReport rep = predict_bias(sys, kGain, 0.0, 0.7);
        CHECK(same_values(rep.predicted_mean, sys.weights));
        CHECK(rep.predicted_bias.isZero(0.0));
    }

    SUBCASE("hand arithmetic at gbar = 1/2") {
        // Two equal-magnitude taps share the gain evenly.
        const SparseSystem sys = gen_sparse_system(2, {{0, 0.9}, {1, -0.9}});
        const SteadyStateReport rep = predict_bias(sys, kGain, 1e-4, 0.7);
        CHECK(rep.steady_gain[0] == 0.5);
        CHECK(rep.predicted_bias[0] == doctest::Approx((1e-4 / 0.7) / 0.5).epsilon(1e-12));
        CHECK(rep.predicted_bias[1] == doctest::Approx(-(1e-4 / 0.7) / 0.5).epsilon(1e-12));
    }

    SUBCASE("benchmark system: dominant tap is nearly unbiased") {
        const SparseSystem sys = gen_sparse_system(512, default_active_taps());
        const SteadyStateReport rep = predict_bias(sys, kGain, 1e-4, 0.7);
        CHECK(std::abs(rep.predicted_bias[37]) < 0.01 * 0.9);
        CHECK(rep.predicted_mean[37] < 0.9);
        // Inactive taps carry no predicted bias.
        CHECK(rep.predicted_bias[0] == 0.0);
        CHECK(rep.predicted_bias[1] == 0.0);
    }

    SUBCASE("mu outside the stable range is rejected, not computed") {
        const SparseSystem sys = gen_sparse_system(4, {{0, 1.0}});
        CHECK_THROWS_AS(predict_bias(sys, kGain, 1e-4, 2.5), std::domain_error);
        CHECK_THROWS_AS(predict_bias(sys, kGain, 1e-4, -0.1), std::domain_error);
    }

    SUBCASE("bias stays toward the origin and scales exactly with rho") {
        Rng rng(44);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::pair<int, double>> taps;
            for (int i = 0; i < 6; ++i)
                if (rng.uniform() < 0.6)
                    taps.emplace_back(i, (0.05 + rng.uniform()) * (rng.uniform() < 0.5 ? -1 : 1));
            const SparseSystem sys = gen_sparse_system(6, taps);
            const double rho = 1e-5 * rng.uniform();
            const SteadyStateReport rep = predict_bias(sys, kGain, rho, 0.7);
            for (int i = 0; i < 6; ++i)
                REQUIRE(std::abs(rep.predicted_mean[i]) <= std::abs(sys.weights[i]));
            const SteadyStateReport doubled = predict_bias(sys, kGain, 2.0 * rho, 0.7);
            REQUIRE(same_values(doubled.predicted_bias, 2.0 * rep.predicted_bias));
        }
    }
}

TEST_CASE("general-covariance prediction") {
    const SparseSystem sys = gen_sparse_system(8, {{1, 0.9}, {4, -0.4}});
    const GainVector gbar = predict_steady_gain(sys, kGain);

    SUBCASE("white covariance collapses to the white-input formula") {
        const double sigma_x2 = 1.7;
        const Eigen::MatrixXd S = sigma_x2 * Eigen::MatrixXd(gbar.asDiagonal());
        const WeightVector mean = predict_mean_general(sys, S, gbar, 1e-4, 0.7,
                                                       default_sign_expectation(sys));
        const SteadyStateReport rep = predict_bias(sys, kGain, 1e-4, 0.7, sigma_x2);
        CHECK((mean - rep.predicted_mean).cwiseAbs().maxCoeff() <= 1e-12);
    }

    SUBCASE("rho = 0 returns the true system") {
        const Eigen::MatrixXd S = steady_s_matrix(sys, kGain, ar1_covariance(8, 0.5, 0.75));
        const WeightVector mean =
            predict_mean_general(sys, S, gbar, 0.0, 0.7, default_sign_expectation(sys));
        CHECK(same_values(mean, sys.weights));
    }

    SUBCASE("singular or non-symmetric S is rejected") {
        CHECK_THROWS_AS(predict_mean_general(sys, Eigen::MatrixXd::Zero(8, 8), gbar, 1e-4, 0.7,
                                             default_sign_expectation(sys)),
                        std::invalid_argument);
        Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(8, 8);
        asym(0, 3) = 0.5;
        CHECK_THROWS_AS(predict_mean_general(sys, asym, gbar, 1e-4, 0.7,
                                             default_sign_expectation(sys)),
                        std::invalid_argument);
        CHECK_THROWS_AS(predict_mean_general(sys, ar1_covariance(8, 0.5, 1.0), gbar, 1e-4, 2.5,
                                             default_sign_expectation(sys)),
                        std::domain_error);
    }

    SUBCASE("colored-input prediction tracks the simulated steady mean") {
        const Eigen::MatrixXd R = ar1_covariance(8, 0.5, 0.75);
        const Eigen::MatrixXd S = steady_s_matrix(sys, kGain, R);
        const WeightVector mean =
            predict_mean_general(sys, S, gbar, 5e-4, 0.5, default_sign_expectation(sys));

        ExperimentConfig cfg;
        cfg.system = sys;
        cfg.input.kind = InputModel::Kind::kAr1;
        cfg.input.pole = 0.5;
        cfg.input.innovation_variance = 0.75;
        cfg.sigma_v2 = 1e-3;
        cfg.iterations = 4000;
        cfg.trials = 100;
        cfg.base_seed = 5;
        cfg.stride = 10;
        cfg.steady_window = 0.25;
        cfg.filters = {za_config(0.5, 5e-4)};
        const ExperimentResult result = run_experiment(cfg);
        const auto& alg = result.per_algorithm[0];
        for (int idx : {1, 4}) {
            REQUIRE(std::abs(mean[idx] - alg.steady_mean_weights[idx]) <=
                    0.3 * std::abs(alg.steady_mean_weights[idx]));
            // The attractor pulls both routes the same way.
            const double predicted_bias = sys.weights[idx] - mean[idx];
            REQUIRE(predicted_bias * alg.bias[idx] > 0.0);
            REQUIRE(std::abs(predicted_bias) <= 2.5 * std::abs(alg.bias[idx]));
            REQUIRE(std::abs(predicted_bias) >= std::abs(alg.bias[idx]) / 2.5);
        }
    }
}

TEST_CASE("projection residual") {
    const Eigen::VectorXd x1 = Eigen::VectorXd::Constant(1, 0.37);
    CHECK(std::abs(projection_residual(x1, Eigen::VectorXd::Ones(1),
                                       Eigen::VectorXd::Constant(1, -2.0)) -
                   1.0) <= 1e-12);
    CHECK(projection_residual(x1, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)) == 0.0);
    CHECK_THROWS_AS(projection_residual(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(3),
                                        Eigen::VectorXd::Ones(3)),
                    std::invalid_argument);

    const int length = 512;
    Rng rng(212);
    const GainVector g = Eigen::VectorXd::Constant(length, 1.0 / length);
    WeightVector w(length);
    for (int i = 0; i < length; ++i) w[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
    Eigen::VectorXd x(length);
    double acc = 0.0;
    const int draws = 2000;
    for (int k = 0; k < draws; ++k) {
        for (int i = 0; i < length; ++i) x[i] = rng.gauss();
        acc += projection_residual(x, g, w);
    }
    CHECK(acc / draws <= 0.1);
}

TEST_CASE("mu stability box") {
    CHECK(check_mu_stability(0.7) == MuStability::kStable);
    CHECK(check_mu_stability(1.999) == MuStability::kStable);
    CHECK(check_mu_stability(2.0) == MuStability::kOutsideBound);
    CHECK(check_mu_stability(0.0) == MuStability::kOutsideBound);
    CHECK(check_mu_stability(-0.1) == MuStability::kOutsideBound);
}

TEST_CASE("steady-state report JSON round trip") {
    const SparseSystem sys = gen_sparse_system(4, {{0, 0.3}, {3, -0.9}});
    const SteadyStateReport rep = predict_bias(sys, kGain, 1e-4, 0.7, 1.3);
    const SteadyStateReport back = SteadyStateReport::from_json(rep.to_json());
    CHECK(same_values(back.predicted_mean, rep.predicted_mean));
    CHECK(same_values(back.predicted_bias, rep.predicted_bias));
    CHECK(same_values(back.steady_gain, rep.steady_gain));
    CHECK(same_values(back.s_matrix, rep.s_matrix));
}
