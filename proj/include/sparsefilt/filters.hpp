#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sparsefilt/gain.hpp"
#include "sparsefilt/signal.hpp"

namespace sparsefilt {

enum class Algorithm { NLMS, PNLMS, ZA_PNLMS, RZA_PNLMS };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct FilterConfig {
    Algorithm algorithm = Algorithm::ZA_PNLMS;
    double mu = 0.7;       // overall step size
    double delta_p = 0.01;  // normalization regularizer
    GainParams gain_params{};
    double rho = 1e-4;     // zero-attraction strength (ZA/RZA)
    double epsilon = 10.0;  // reweighting constant (RZA)

    // Diagnostics. Uniform gain turns the proportionate update into a plain
    // normalized one; the clamp stops attractor shrinkage at zero instead of
    // letting tiny taps overshoot through it.
    bool force_uniform_gain = false;
    bool clamp_attractor = false;

    void validate() const;
};

struct FilterState {
    WeightVector w;
    long n = 0;
    double last_error = 0.0;

    static FilterState zeros(int length);
};

namespace detail {

/// Scratch buffers reused across steps so the driver loop does not allocate.
struct StepWorkspace {
    Eigen::VectorXd gain;
    Eigen::VectorXd scaled_x;  // g .* x
};

/// One weight update in place. `x` points at the regressor
/// [x(n), x(n-1), ..., x(n-L+1)]. Returns the a-priori error and reports the
/// largest post-update weight magnitude for divergence checks. All public
/// step entry points and the run driver funnel through here, so single-step
/// results and full-run trajectories match bit for bit.
double step_in_place(Eigen::VectorXd& w, const double* x, double d, const FilterConfig& cfg,
                     StepWorkspace& ws, double* max_abs_w);

}  // namespace detail

FilterState nlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                      const FilterConfig& cfg);
FilterState pnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                       const FilterConfig& cfg);
FilterState zapnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                         const FilterConfig& cfg);
FilterState rzapnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                          const FilterConfig& cfg);

/// Dispatch on cfg.algorithm.
FilterState filter_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                        const FilterConfig& cfg);

/// Weight snapshot policy for full runs: stride 1 records every iteration,
/// stride k > 1 every k-th (plus the initial and final state), stride 0 only
/// the initial and final state.
struct RecordPolicy {
    int stride = 1;
};

/// Trajectory of one adaptive run. Snapshot row j holds the weights after
/// snapshot_iters[j] updates (row 0 is the all-zero initial state). `errors`
/// holds the a-priori error e(n) for each processed sample.
struct RunRecord {
    std::vector<long> snapshot_iters;
    Eigen::MatrixXd snapshots;  // (#snapshots) x L
    Eigen::VectorXd errors;
    bool diverged = false;
    long diverged_at = -1;  // sample index that tripped the divergence guard
    FilterState final_state;
};

/// Drive the configured filter across the whole buffer from a zero initial
/// state. Aborts (with the record flagged, not an exception) as soon as a
/// weight exceeds 1e12 in magnitude or turns non-finite.
RunRecord run_filter(const FilterConfig& cfg, int length, const SignalBuffer& input,
                     const SignalBuffer& desired, const RecordPolicy& record = {});

inline constexpr double kDivergenceLimit = 1e12;

}  // namespace sparsefilt
