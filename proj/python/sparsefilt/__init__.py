"""Sparse system identification with zero-attracting proportionate adaptive filters."""

from ._core import (  # noqa: F401
    Algorithm,
    AlgorithmResult,
    AngularSampler,
    CovarianceModel,
    ExperimentConfig,
    ExperimentResult,
    FilterConfig,
    FilterState,
    GainParams,
    InputModel,
    MuStability,
    NormSource,
    RecordPolicy,
    RngSeed,
    RunRecord,
    SignalBuffer,
    SparseSystem,
    SteadyStateReport,
    algorithm_from_name,
    algorithm_name,
    angular_discretize_batch,
    ar1_covariance,
    check_mu_stability,
    compute_gain,
    compute_gamma,
    default_active_taps,
    default_sign_expectation,
    emse_curve,
    estimate_B,
    export_result,
    extract_bias,
    filter_step,
    gain_inv_sqrt,
    gain_sqrt,
    gen_ar1,
    gen_sparse_system,
    gen_white_gaussian,
    import_result,
    load_scenario,
    msd_curve,
    nlms_step,
    pnlms_step,
    predict_bias,
    predict_mean_general,
    predict_steady_gain,
    projection_residual,
    run_experiment,
    run_filter,
    run_verify_suite,
    rzapnlms_step,
    simulated_steady_gain,
    steady_s_matrix,
    system_output,
    tail_mean,
    transform_step_check,
    zapnlms_step,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
