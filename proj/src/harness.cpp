#include "sparsefilt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "sparsefilt/theory.hpp"

namespace sparsefilt {

double InputModel::stationary_variance() const {
    if (kind == Kind::kWhite) return variance;
    return innovation_variance / (1.0 - pole * pole);
}

SignalBuffer InputModel::generate(int n, RngSeed seed) const {
    if (kind == Kind::kWhite) return gen_white_gaussian(n, variance, seed);
    return gen_ar1(n, pole, innovation_variance, seed);
}

Eigen::MatrixXd InputModel::covariance(int length) const {
    if (kind == Kind::kWhite)
        return variance * Eigen::MatrixXd::Identity(length, length);
    return ar1_covariance(length, pole, innovation_variance);
}

void ExperimentConfig::validate() const {
    if (system.length() < 1) throw std::invalid_argument("ExperimentConfig: empty system");
    if (iterations < 1) throw std::invalid_argument("ExperimentConfig: iterations must be >= 1");
    if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
    if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("ExperimentConfig: sigma_v2 must be >= 0");
    if (stride < 0) throw std::invalid_argument("ExperimentConfig: stride must be >= 0");
    if (!(steady_window > 0.0) || steady_window > 1.0)
        throw std::invalid_argument("ExperimentConfig: steady_window must be in (0, 1]");
    if (filters.empty()) throw std::invalid_argument("ExperimentConfig: no algorithms configured");
    for (const auto& f : filters) f.validate();
}

const AlgorithmResult& ExperimentResult::algorithm(const std::string& name) const {
    for (const auto& a : per_algorithm)
        if (a.algorithm == name) return a;
    throw std::invalid_argument("ExperimentResult: no result for algorithm " + name);
}

namespace {

int resolve_threads(const ExperimentConfig& cfg) {
    int threads = cfg.max_threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("SPARSEFILT_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    return std::min(threads, cfg.trials);
}

struct TrialOutput {
    std::vector<RunRecord> records;  // one per configured filter
};

TrialOutput run_trial(const ExperimentConfig& cfg, int trial) {
    const int n = static_cast<int>(cfg.iterations);
    const SignalBuffer input =
        cfg.input.generate(n, RngSeed{derive_seed(cfg.base_seed, trial, 1)});
    const SignalBuffer noise =
        gen_white_gaussian(n, cfg.sigma_v2, RngSeed{derive_seed(cfg.base_seed, trial, 2)});
    const SignalBuffer desired = system_output(cfg.system, input, noise);

    TrialOutput out;
    out.records.reserve(cfg.filters.size());
    for (const auto& filter_cfg : cfg.filters)
        out.records.push_back(
            run_filter(filter_cfg, cfg.system.length(), input, desired, RecordPolicy{cfg.stride}));
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const int L = cfg.system.length();
    const std::size_t n_alg = cfg.filters.size();

    ExperimentResult result;
    result.length = L;
    result.w_opt = cfg.system.weights;
    result.input = cfg.input;
    result.sigma_v2 = cfg.sigma_v2;
    result.iterations = cfg.iterations;
    result.trials = cfg.trials;
    result.stride = cfg.stride;
    result.steady_window = cfg.steady_window;
    result.base_seed = cfg.base_seed;
    result.per_algorithm.resize(n_alg);

    // Snapshot grid is data independent; probe it with an empty run.
    std::vector<long> iters{0};
    if (cfg.stride >= 1)
        for (long k = cfg.stride; k <= cfg.iterations; k += cfg.stride) iters.push_back(k);
    if (iters.back() != cfg.iterations) iters.push_back(cfg.iterations);
    const auto n_snap = static_cast<long>(iters.size());

    for (std::size_t a = 0; a < n_alg; ++a) {
        auto& alg = result.per_algorithm[a];
        alg.algorithm = algorithm_name(cfg.filters[a].algorithm);
        alg.snapshot_iters = iters;
        alg.mean_weights = Eigen::MatrixXd::Zero(n_snap, L);
        alg.mean_sq_dev = Eigen::VectorXd::Zero(n_snap);
        alg.mean_sq_error = Eigen::VectorXd::Zero(cfg.iterations);
    }

    const int threads = resolve_threads(cfg);
    for (int block = 0; block < cfg.trials; block += threads) {
        const int block_end = std::min(cfg.trials, block + threads);
        std::vector<std::future<TrialOutput>> futures;
        futures.reserve(static_cast<std::size_t>(block_end - block));
        for (int t = block; t < block_end; ++t)
            futures.push_back(
                std::async(std::launch::async, [&cfg, t] { return run_trial(cfg, t); }));

        // Accumulate in ascending trial order: the reduction is independent
        // of the thread count.
        for (int t = block; t < block_end; ++t) {
            TrialOutput out = futures[static_cast<std::size_t>(t - block)].get();
            for (std::size_t a = 0; a < n_alg; ++a) {
                auto& alg = result.per_algorithm[a];
                const RunRecord& rec = out.records[a];
                if (rec.diverged) {
                    alg.diverged_trials.push_back(t);
                    continue;
                }
                alg.mean_weights += rec.snapshots;
                for (long j = 0; j < n_snap; ++j)
                    alg.mean_sq_dev[j] +=
                        (result.w_opt.transpose() - rec.snapshots.row(j)).squaredNorm();
                alg.mean_sq_error.array() += rec.errors.array().square();
                ++alg.completed_trials;
            }
        }
    }

    for (auto& alg : result.per_algorithm) {
        if (alg.completed_trials > 0) {
            const double inv = 1.0 / alg.completed_trials;
            alg.mean_weights *= inv;
            alg.mean_sq_dev *= inv;
            alg.mean_sq_error *= inv;
            alg.bias = extract_bias(alg, result.w_opt, cfg.steady_window);
            alg.steady_mean_weights = result.w_opt - alg.bias;
        } else {
            alg.steady_mean_weights = WeightVector::Zero(L);
            alg.bias = WeightVector::Zero(L);
        }
    }
    return result;
}

Eigen::VectorXd msd_curve(const AlgorithmResult& result) {
    if (result.snapshot_iters.empty())
        throw std::invalid_argument("msd_curve: no snapshots recorded");
    return result.mean_sq_dev;
}

Eigen::VectorXd emse_curve(const AlgorithmResult& result, double sigma_v2) {
    if (result.mean_sq_error.size() == 0)
        throw std::invalid_argument("emse_curve: no error curve recorded");
    if (!(sigma_v2 >= 0.0)) throw std::invalid_argument("emse_curve: sigma_v2 must be >= 0");
    return (result.mean_sq_error.array() - sigma_v2).max(0.0);
}

WeightVector extract_bias(const AlgorithmResult& result, const WeightVector& w_opt,
                          double window_fraction) {
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("extract_bias: window fraction must be in (0, 1]");
    if (result.snapshot_iters.empty())
        throw std::invalid_argument("extract_bias: no snapshots recorded");
    const long last = result.snapshot_iters.back();
    const auto start_iter = static_cast<long>(std::ceil((1.0 - window_fraction) * last));

    WeightVector acc = WeightVector::Zero(result.mean_weights.cols());
    long count = 0;
    for (std::size_t j = 0; j < result.snapshot_iters.size(); ++j) {
        if (result.snapshot_iters[j] < start_iter) continue;
        acc += result.mean_weights.row(static_cast<long>(j)).transpose();
        ++count;
    }
    if (count == 0) throw std::invalid_argument("extract_bias: empty steady-state window");
    acc /= static_cast<double>(count);
    if (w_opt.size() != acc.size())
        throw std::invalid_argument("extract_bias: w_opt length mismatch");
    return w_opt - acc;
}

double tail_mean(const Eigen::VectorXd& series, double window_fraction) {
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("tail_mean: window fraction must be in (0, 1]");
    const auto n = series.size();
    if (n == 0) throw std::invalid_argument("tail_mean: empty series");
    auto start = static_cast<Eigen::Index>(std::ceil((1.0 - window_fraction) * n));
    if (start >= n) start = n - 1;
    return series.segment(start, n - start).mean();
}

}  // namespace sparsefilt
