// Acceptance suite: every release gate in one binary. Each criterion prints
// a single [PASS]/[FAIL] line with the measured quantities; the process exits
// nonzero if any gate fails. Budgeted to run in about a minute on two cores.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <vector>

#include "sparsefilt/filters.hpp"
#include "sparsefilt/harness.hpp"
#include "sparsefilt/signal.hpp"
#include "sparsefilt/theory.hpp"
#include "sparsefilt/verify.hpp"

using namespace sparsefilt;

namespace {

int g_failures = 0;

void outcome(int criterion, bool ok, const std::string& detail) {
    if (!ok) ++g_failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GainParams bench_gain() { return GainParams{0.01, 0.001}; }

FilterConfig bench_filter(Algorithm alg, double mu = 0.7, double rho = 1e-4) {
    FilterConfig cfg;
    cfg.algorithm = alg;
    cfg.mu = mu;
    cfg.rho = rho;
    cfg.delta_p = 0.01;
    cfg.gain_params = bench_gain();
    cfg.epsilon = 10.0;
    return cfg;
}

SparseSystem bench_system() { return gen_sparse_system(512, default_active_taps()); }

SparseSystem smoke_system() {
    return gen_sparse_system(64, {{4, 0.9},
                                  {9, 0.85},
                                  {15, -0.8},
                                  {22, 0.7},
                                  {29, -0.5},
                                  {37, 0.3},
                                  {46, -0.2},
                                  {57, 0.15}});
}

ExperimentConfig smoke_experiment(double mu, double rho) {
    ExperimentConfig cfg;
    cfg.system = smoke_system();
    cfg.input.kind = InputModel::Kind::kWhite;
    cfg.input.variance = 1.0;
    cfg.sigma_v2 = 1e-3;
    cfg.iterations = 5000;
    cfg.trials = 10;
    cfg.base_seed = 7;
    cfg.stride = 10;
    cfg.steady_window = 0.1;
    cfg.filters = {bench_filter(Algorithm::ZA_PNLMS, mu, rho)};
    return cfg;
}

// 1. Reduction identities, bit exact over 1000-step randomized runs.
void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream sink;
    const bool ok = verify_reductions(sink);
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "reduction identities bit-exact (za|rho=0 == pnlms, rza|eps=0 == za, uniform gain "
              "== nlms) in "
           << elapsed << " s";
    outcome(1, ok && elapsed < 1.0, detail.str());
}

// 2. Transform-domain exactness over 1e4 random instances.
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream sink;
    const bool ok = verify_transform(sink);
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "transform route matches direct route within 1e-12 on 10200 instances in "
           << elapsed << " s";
    outcome(2, ok && elapsed < 5.0, detail.str());
}

// 3. Gain simplex on every step of a 25k-iteration run at L = 64.
void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    const int length = 64;
    const long iterations = 25000;
    const SparseSystem sys = smoke_system();
    const SignalBuffer input =
        gen_white_gaussian(static_cast<int>(iterations), 1.0, RngSeed{1001});
    const SignalBuffer noise =
        gen_white_gaussian(static_cast<int>(iterations), 1e-3, RngSeed{1002});
    const SignalBuffer desired = system_output(sys, input, noise);
    const FilterConfig cfg = bench_filter(Algorithm::ZA_PNLMS);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(length);
    Eigen::VectorXd regressor = Eigen::VectorXd::Zero(length);
    detail::StepWorkspace ws;
    double worst_sum = 0.0;
    double min_gain = 1.0;
    for (long n = 0; n < iterations; ++n) {
        std::memmove(regressor.data() + 1, regressor.data(), sizeof(double) * (length - 1));
        regressor[0] = input.samples[n];
        detail::step_in_place(w, regressor.data(), desired.samples[n], cfg, ws, nullptr);
        worst_sum = std::max(worst_sum, std::abs(ws.gain.sum() - 1.0));
        min_gain = std::min(min_gain, ws.gain.minCoeff());
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "gain simplex over 25k steps: max |sum-1| = " << worst_sum
           << ", min gain = " << min_gain << ", in " << elapsed << " s";
    outcome(3, worst_sum <= 1e-12 && min_gain > 0.0 && elapsed < 10.0, detail.str());
}

// 4. Angular discretization moments and the direction-matrix identity.
void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream sink;
    const bool ok = verify_discretization(sink);
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << "sampler second moments within 2% of R, direction matrix within 0.003 of I/L and "
              "S/Tr(S), in "
           << elapsed << " s";
    outcome(4, ok && elapsed < 30.0, detail.str());
}

// 5. Benchmark learning-curve reproduction, full scale and smoke scale.
void criterion_5() {
    ExperimentConfig full;
    full.system = bench_system();
    full.input.kind = InputModel::Kind::kWhite;
    full.input.variance = 1.0;
    full.sigma_v2 = 1e-3;
    full.iterations = 25000;
    full.trials = 30;
    full.base_seed = 12345;
    full.stride = 10;
    full.steady_window = 0.1;
    full.filters = {bench_filter(Algorithm::ZA_PNLMS)};
    const ExperimentResult result = run_experiment(full);
    const auto& alg = result.per_algorithm[0];
    const double tail37 = alg.steady_mean_weights[37];
    const double tail1 = alg.steady_mean_weights[1];
    {
        const Eigen::VectorXd msd = msd_curve(alg);
        const double drop_db = 10.0 * std::log10(msd[0] / tail_mean(msd, full.steady_window));
        std::ostringstream detail;
        detail << "full run (L=512, T=30, N=25000): tail mean w37 = " << tail37
               << " (target 0.9 +- 0.01), w1 = " << tail1 << " (target 0 +- 0.005), MSD drop "
               << drop_db << " dB (>= 20)";
        outcome(5, std::abs(tail37 - 0.9) <= 0.01 && std::abs(tail1) <= 0.005 &&
                       drop_db >= 20.0 && alg.diverged_trials.empty(),
                detail.str());
    }

    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult smoke = run_experiment(smoke_experiment(0.7, 1e-4));
    const double elapsed = seconds_since(start);
    const auto& salg = smoke.per_algorithm[0];
    const double stail = salg.steady_mean_weights[4];
    const double sinactive = salg.steady_mean_weights[1];
    std::ostringstream detail;
    detail << "smoke run (L=64, T=10, N=5000): tail mean w4 = " << stail
           << " (target 0.9 +- 0.01), w1 = " << sinactive << " (target 0 +- 0.005), in "
           << elapsed << " s";
    outcome(5, std::abs(stail - 0.9) <= 0.01 && std::abs(sinactive) <= 0.005 && elapsed < 20.0,
            detail.str());
}

// 6. Steady-state bias agreement with the white-input predictor.
void criterion_6() {
    const double mu = 0.35;
    const double rho = 5e-5;
    ExperimentConfig cfg;
    cfg.system = smoke_system();
    cfg.input.kind = InputModel::Kind::kWhite;
    cfg.input.variance = 1.0;
    cfg.sigma_v2 = 1e-3;
    cfg.iterations = 10000;
    cfg.trials = 2000;
    cfg.base_seed = 2718;
    cfg.stride = 10;
    cfg.steady_window = 0.25;
    cfg.filters = {bench_filter(Algorithm::ZA_PNLMS, mu, rho)};
    const ExperimentResult result = run_experiment(cfg);
    const auto& alg = result.per_algorithm[0];
    const SteadyStateReport prediction = predict_bias(cfg.system, bench_gain(), rho, mu);

    bool signs = true;
    bool magnitudes = true;
    double worst_rel = 0.0;
    bool monotone = true;
    double prev_mag = 0.0;
    // Active taps in decreasing |w_opt| order (all at least 0.05 here).
    for (int idx : {4, 9, 15, 22, 29, 37, 46, 57}) {
        const double measured = alg.bias[idx];
        const double predicted = prediction.predicted_bias[idx];
        if (measured * predicted <= 0.0) signs = false;
        const double rel = std::abs(measured - predicted) / std::abs(predicted);
        worst_rel = std::max(worst_rel, rel);
        if (rel > 0.3) magnitudes = false;
        if (std::abs(measured) <= prev_mag) monotone = false;
        prev_mag = std::abs(measured);
    }
    std::ostringstream detail;
    detail << "bias vs predictor on 8 active taps (mu=0.35, rho=5e-5, T=2000): signs "
           << (signs ? "match" : "MISMATCH") << ", worst relative error = " << worst_rel
           << " (limit 0.3), bias decreasing in |w_opt|: " << (monotone ? "yes" : "NO");
    outcome(6, signs && magnitudes && monotone, detail.str());
}

// 7. Steady-state EMSE ordering on the benchmark system with paired seeds.
void criterion_7() {
    ExperimentConfig cfg;
    cfg.system = bench_system();
    cfg.input.kind = InputModel::Kind::kWhite;
    cfg.input.variance = 1.0;
    cfg.sigma_v2 = 1e-3;
    cfg.iterations = 25000;
    cfg.trials = 30;
    cfg.base_seed = 12345;
    cfg.stride = 50;
    cfg.steady_window = 0.1;
    const double rho = 2e-5;  // attractor level at which every reflection survives
    cfg.filters = {bench_filter(Algorithm::PNLMS, 0.7, rho),
                   bench_filter(Algorithm::ZA_PNLMS, 0.7, rho),
                   bench_filter(Algorithm::RZA_PNLMS, 0.7, rho)};
    const ExperimentResult result = run_experiment(cfg);
    const double pn = tail_mean(emse_curve(result.algorithm("pnlms"), cfg.sigma_v2), 0.1);
    const double za = tail_mean(emse_curve(result.algorithm("za_pnlms"), cfg.sigma_v2), 0.1);
    const double rza = tail_mean(emse_curve(result.algorithm("rza_pnlms"), cfg.sigma_v2), 0.1);
    std::ostringstream detail;
    detail << "paired-seed tail EMSE: pnlms = " << pn << ", za_pnlms = " << za
           << ", rza_pnlms = " << rza << " (want za <= pnlms and rza <= za)";
    outcome(7, za <= pn && rza <= za, detail.str());
}

// 8. Step-size stability box on the smoke system.
void criterion_8() {
    bool ok = true;
    std::ostringstream detail;
    detail << "stability sweep:";
    for (double mu : {0.1, 0.7, 1.9}) {
        ExperimentConfig cfg = smoke_experiment(mu, 1e-4);
        cfg.trials = 5;
        cfg.base_seed = 31;
        const ExperimentResult result = run_experiment(cfg);
        const auto& alg = result.per_algorithm[0];
        const Eigen::VectorXd msd = msd_curve(alg);
        const double tail = tail_mean(msd, 0.1);
        const bool converged =
            alg.diverged_trials.empty() && tail < 0.5 * msd[0] && std::isfinite(tail);
        detail << " mu=" << mu << " tail MSD " << tail << (converged ? " ok;" : " BAD;");
        ok &= converged;
    }
    ExperimentConfig cfg = smoke_experiment(4.0, 1e-4);
    cfg.trials = 5;
    cfg.base_seed = 31;
    const ExperimentResult result = run_experiment(cfg);
    const bool flagged = !result.per_algorithm[0].diverged_trials.empty();
    detail << " mu=4 divergence flag " << (flagged ? "raised" : "MISSING");
    outcome(8, ok && flagged, detail.str());
}

// 9. The dropped projection term is small at large L and dominant at L = 1.
void criterion_9() {
    std::ostringstream sink;
    const bool ok = verify_projection(sink);
    outcome(9, ok,
            "projection residual: exactly 1 at L=1, mean <= 0.15 at L=512 over 1e4 draws, 0 for "
            "zero weights");
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << " ("
              << g_failures << " failures, " << seconds_since(start) << " s total)" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
