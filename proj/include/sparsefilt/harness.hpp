#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sparsefilt/filters.hpp"
#include "sparsefilt/signal.hpp"

namespace sparsefilt {

/// Stationary input process driving the experiments.
struct InputModel {
    enum class Kind { kWhite, kAr1 };
    Kind kind = Kind::kWhite;
    double variance = 1.0;             // white
    double pole = 0.0;                 // ar1
    double innovation_variance = 1.0;  // ar1

    bool is_white() const { return kind == Kind::kWhite; }
    double stationary_variance() const;
    SignalBuffer generate(int n, RngSeed seed) const;
    /// Input correlation matrix over an L-sample regressor window.
    Eigen::MatrixXd covariance(int length) const;
};

struct ExperimentConfig {
    SparseSystem system;
    InputModel input;
    double sigma_v2 = 1e-3;
    std::vector<FilterConfig> filters;  // algorithms compared on shared signals
    long iterations = 25000;
    int trials = 30;
    std::uint64_t base_seed = 1;
    int stride = 10;              // weight snapshot stride
    double steady_window = 0.1;   // tail fraction used for steady-state stats
    int max_threads = 0;          // 0: SPARSEFILT_THREADS env var, else hardware

    void validate() const;
};

/// Averaged trajectories and steady-state metrics for one algorithm.
/// Diverged trials are excluded from every average and listed by index.
struct AlgorithmResult {
    std::string algorithm;
    std::vector<long> snapshot_iters;
    Eigen::MatrixXd mean_weights;      // (#snapshots) x L
    Eigen::VectorXd mean_sq_dev;       // per snapshot: mean of ||w_opt - w(n)||^2
    Eigen::VectorXd mean_sq_error;     // per iteration: mean of e(n)^2
    WeightVector steady_mean_weights;  // tail-window mean of the mean trajectory
    WeightVector bias;                 // w_opt - steady_mean_weights
    std::vector<int> diverged_trials;
    int completed_trials = 0;
};

struct ExperimentResult {
    int length = 0;
    WeightVector w_opt;
    InputModel input;
    double sigma_v2 = 0.0;
    long iterations = 0;
    int trials = 0;
    int stride = 0;
    double steady_window = 0.0;
    std::uint64_t base_seed = 0;
    std::vector<AlgorithmResult> per_algorithm;

    const AlgorithmResult& algorithm(const std::string& name) const;
};

/// Runs trials x algorithms and averages in fixed trial order, so the result
/// is a pure function of the config regardless of thread count. Trial t feeds
/// every algorithm the same input and noise realization (seeds derived from
/// (base_seed, t) per stream), which keeps cross-algorithm comparisons paired.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Mean square deviation E||w_opt - w(n)||^2 at the recorded snapshots.
Eigen::VectorXd msd_curve(const AlgorithmResult& result);

/// Excess mean square error: mean e(n)^2 minus the known noise power,
/// floored at zero.
Eigen::VectorXd emse_curve(const AlgorithmResult& result, double sigma_v2);

/// Steady-state bias over the trailing `window_fraction` of the run:
/// bias_i = w_opt_i - mean of the averaged trajectory.
WeightVector extract_bias(const AlgorithmResult& result, const WeightVector& w_opt,
                          double window_fraction);

/// Mean of the trailing `window_fraction` of a per-iteration series.
double tail_mean(const Eigen::VectorXd& series, double window_fraction);

}  // namespace sparsefilt
