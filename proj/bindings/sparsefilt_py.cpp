#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sparsefilt/harness.hpp"
#include "sparsefilt/io.hpp"
#include "sparsefilt/scenario.hpp"
#include "sparsefilt/theory.hpp"
#include "sparsefilt/verify.hpp"

#include <sstream>

namespace py = pybind11;
using namespace sparsefilt;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse system identification with zero-attracting proportionate adaptive filters";

    py::class_<RngSeed>(m, "RngSeed")
        .def(py::init<std::uint64_t>(), py::arg("value") = 0)
        .def_readwrite("value", &RngSeed::value);
    py::implicitly_convertible<std::uint64_t, RngSeed>();

    py::class_<SparseSystem>(m, "SparseSystem")
        .def_readonly("weights", &SparseSystem::weights)
        .def_readonly("active_indices", &SparseSystem::active_indices)
        .def_property_readonly("length", &SparseSystem::length);

    py::class_<SignalBuffer>(m, "SignalBuffer")
        .def(py::init([](Eigen::VectorXd samples) {
                 SignalBuffer b;
                 b.samples = std::move(samples);
                 return b;
             }),
             py::arg("samples"))
        .def_readwrite("samples", &SignalBuffer::samples)
        .def_readwrite("nominal_variance", &SignalBuffer::nominal_variance);

    m.def("gen_sparse_system", &gen_sparse_system, py::arg("length"), py::arg("taps"));
    m.def("default_active_taps", [] { return default_active_taps(); });
    m.def("gen_white_gaussian", &gen_white_gaussian, py::arg("n"), py::arg("variance"),
          py::arg("seed"));
    m.def("gen_ar1", &gen_ar1, py::arg("n"), py::arg("pole"), py::arg("innovation_variance"),
          py::arg("seed"));
    m.def("system_output", &system_output, py::arg("system"), py::arg("input"), py::arg("noise"));

    py::class_<GainParams>(m, "GainParams")
        .def(py::init([](double rho_g, double delta) {
                 GainParams p;
                 p.rho_g = rho_g;
                 p.delta = delta;
                 return p;
             }),
             py::arg("rho_g") = 0.01, py::arg("delta") = 0.001)
        .def_readwrite("rho_g", &GainParams::rho_g)
        .def_readwrite("delta", &GainParams::delta);

    m.def("compute_gamma", &compute_gamma, py::arg("w"), py::arg("params"));
    m.def("compute_gain", &compute_gain, py::arg("w"), py::arg("params"));
    m.def("gain_sqrt", &gain_sqrt, py::arg("g"));
    m.def("gain_inv_sqrt", &gain_inv_sqrt, py::arg("g"));

    py::enum_<Algorithm>(m, "Algorithm")
        .value("NLMS", Algorithm::NLMS)
        .value("PNLMS", Algorithm::PNLMS)
        .value("ZA_PNLMS", Algorithm::ZA_PNLMS)
        .value("RZA_PNLMS", Algorithm::RZA_PNLMS);
    m.def("algorithm_name", &algorithm_name);
    m.def("algorithm_from_name", &algorithm_from_name);

    py::class_<FilterConfig>(m, "FilterConfig")
        .def(py::init<>())
        .def_readwrite("algorithm", &FilterConfig::algorithm)
        .def_readwrite("mu", &FilterConfig::mu)
        .def_readwrite("delta_p", &FilterConfig::delta_p)
        .def_readwrite("gain_params", &FilterConfig::gain_params)
        .def_readwrite("rho", &FilterConfig::rho)
        .def_readwrite("epsilon", &FilterConfig::epsilon)
        .def_readwrite("force_uniform_gain", &FilterConfig::force_uniform_gain)
        .def_readwrite("clamp_attractor", &FilterConfig::clamp_attractor)
        .def("validate", &FilterConfig::validate);

    py::class_<FilterState>(m, "FilterState")
        .def_static("zeros", &FilterState::zeros, py::arg("length"))
        .def_readwrite("w", &FilterState::w)
        .def_readwrite("n", &FilterState::n)
        .def_readwrite("last_error", &FilterState::last_error);

    m.def("nlms_step", &nlms_step);
    m.def("pnlms_step", &pnlms_step);
    m.def("zapnlms_step", &zapnlms_step);
    m.def("rzapnlms_step", &rzapnlms_step);
    m.def("filter_step", &filter_step);

    py::class_<RecordPolicy>(m, "RecordPolicy")
        .def(py::init([](int stride) { return RecordPolicy{stride}; }), py::arg("stride") = 1)
        .def_readwrite("stride", &RecordPolicy::stride);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("snapshot_iters", &RunRecord::snapshot_iters)
        .def_readonly("snapshots", &RunRecord::snapshots)
        .def_readonly("errors", &RunRecord::errors)
        .def_readonly("diverged", &RunRecord::diverged)
        .def_readonly("diverged_at", &RunRecord::diverged_at)
        .def_readonly("final_state", &RunRecord::final_state);

    m.def("run_filter", &run_filter, py::arg("cfg"), py::arg("length"), py::arg("input"),
          py::arg("desired"), py::arg("record") = RecordPolicy{1});

    py::class_<InputModel> input_model(m, "InputModel");
    py::enum_<InputModel::Kind>(input_model, "Kind")
        .value("WHITE", InputModel::Kind::kWhite)
        .value("AR1", InputModel::Kind::kAr1);
    input_model.def(py::init<>())
        .def_readwrite("kind", &InputModel::kind)
        .def_readwrite("variance", &InputModel::variance)
        .def_readwrite("pole", &InputModel::pole)
        .def_readwrite("innovation_variance", &InputModel::innovation_variance)
        .def("stationary_variance", &InputModel::stationary_variance)
        .def("covariance", &InputModel::covariance, py::arg("length"))
        .def_static("white",
                    [](double variance) {
                        InputModel im;
                        im.kind = InputModel::Kind::kWhite;
                        im.variance = variance;
                        return im;
                    },
                    py::arg("variance") = 1.0)
        .def_static("ar1", [](double pole, double innovation_variance) {
            InputModel im;
            im.kind = InputModel::Kind::kAr1;
            im.pole = pole;
            im.innovation_variance = innovation_variance;
            return im;
        });

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("system", &ExperimentConfig::system)
        .def_readwrite("input", &ExperimentConfig::input)
        .def_readwrite("sigma_v2", &ExperimentConfig::sigma_v2)
        .def_readwrite("filters", &ExperimentConfig::filters)
        .def_readwrite("iterations", &ExperimentConfig::iterations)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("base_seed", &ExperimentConfig::base_seed)
        .def_readwrite("stride", &ExperimentConfig::stride)
        .def_readwrite("steady_window", &ExperimentConfig::steady_window)
        .def_readwrite("max_threads", &ExperimentConfig::max_threads);

    py::class_<AlgorithmResult>(m, "AlgorithmResult")
        .def_readonly("algorithm", &AlgorithmResult::algorithm)
        .def_readonly("snapshot_iters", &AlgorithmResult::snapshot_iters)
        .def_readonly("mean_weights", &AlgorithmResult::mean_weights)
        .def_readonly("mean_sq_dev", &AlgorithmResult::mean_sq_dev)
        .def_readonly("mean_sq_error", &AlgorithmResult::mean_sq_error)
        .def_readonly("steady_mean_weights", &AlgorithmResult::steady_mean_weights)
        .def_readonly("bias", &AlgorithmResult::bias)
        .def_readonly("diverged_trials", &AlgorithmResult::diverged_trials)
        .def_readonly("completed_trials", &AlgorithmResult::completed_trials);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("length", &ExperimentResult::length)
        .def_readonly("w_opt", &ExperimentResult::w_opt)
        .def_readonly("input", &ExperimentResult::input)
        .def_readonly("sigma_v2", &ExperimentResult::sigma_v2)
        .def_readonly("iterations", &ExperimentResult::iterations)
        .def_readonly("trials", &ExperimentResult::trials)
        .def_readonly("stride", &ExperimentResult::stride)
        .def_readonly("steady_window", &ExperimentResult::steady_window)
        .def_readonly("base_seed", &ExperimentResult::base_seed)
        .def_readonly("per_algorithm", &ExperimentResult::per_algorithm)
        .def("algorithm", &ExperimentResult::algorithm, py::return_value_policy::reference_internal);

    m.def("run_experiment", &run_experiment, py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());
    m.def("msd_curve", &msd_curve);
    m.def("emse_curve", &emse_curve);
    m.def("extract_bias", &extract_bias, py::arg("result"), py::arg("w_opt"),
          py::arg("window_fraction"));
    m.def("tail_mean", &tail_mean, py::arg("series"), py::arg("window_fraction"));

    py::class_<CovarianceModel>(m, "CovarianceModel")
        .def_static("from_covariance", &CovarianceModel::from_covariance, py::arg("R"))
        .def_readonly("R", &CovarianceModel::R)
        .def_readonly("eigenvalues", &CovarianceModel::eigenvalues)
        .def_readonly("eigenvectors", &CovarianceModel::eigenvectors);

    m.def("ar1_covariance", &ar1_covariance, py::arg("length"), py::arg("pole"),
          py::arg("innovation_variance"));

    py::class_<NormSource>(m, "NormSource")
        .def_static("gaussian", &NormSource::gaussian, py::arg("model"))
        .def_static("resampled", &NormSource::resampled, py::arg("recorded_norms"));

    py::class_<AngularSampler>(m, "AngularSampler")
        .def(py::init<const CovarianceModel&, NormSource, RngSeed>(), py::arg("model"),
             py::arg("norm_source"), py::arg("seed"), py::keep_alive<1, 2>())
        .def("draw", &AngularSampler::draw);

    m.def("angular_discretize_batch", &angular_discretize_batch, py::arg("model"),
          py::arg("norm_source"), py::arg("count"), py::arg("seed"));
    m.def("estimate_B", &estimate_B, py::arg("samples"));
    m.def("transform_step_check", &transform_step_check, py::arg("w"), py::arg("x"), py::arg("d"),
          py::arg("cfg"));
    m.def("predict_steady_gain", &predict_steady_gain, py::arg("system"), py::arg("params"));
    m.def("simulated_steady_gain", &simulated_steady_gain, py::arg("system"), py::arg("cfg"),
          py::arg("sigma_x2"), py::arg("sigma_v2"), py::arg("iterations"), py::arg("trials"),
          py::arg("window_fraction"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<SteadyStateReport>(m, "SteadyStateReport")
        .def_readonly("predicted_mean", &SteadyStateReport::predicted_mean)
        .def_readonly("predicted_bias", &SteadyStateReport::predicted_bias)
        .def_readonly("steady_gain", &SteadyStateReport::steady_gain)
        .def_readonly("s_matrix", &SteadyStateReport::s_matrix)
        .def("to_json_string",
             [](const SteadyStateReport& r) { return r.to_json().dump(2); });

    m.def("predict_bias", &predict_bias, py::arg("system"), py::arg("params"), py::arg("rho"),
          py::arg("mu"), py::arg("sigma_x2") = 1.0);
    m.def("predict_mean_general", &predict_mean_general, py::arg("system"), py::arg("s_inf"),
          py::arg("gain_expectations"), py::arg("rho"), py::arg("mu"),
          py::arg("sign_expectation"));
    m.def("default_sign_expectation", &default_sign_expectation, py::arg("system"));
    m.def("steady_s_matrix", &steady_s_matrix, py::arg("system"), py::arg("params"), py::arg("R"));
    m.def("projection_residual", &projection_residual, py::arg("x"), py::arg("g"), py::arg("w"));

    py::enum_<MuStability>(m, "MuStability")
        .value("STABLE", MuStability::kStable)
        .value("OUTSIDE_BOUND", MuStability::kOutsideBound);
    m.def("check_mu_stability", &check_mu_stability, py::arg("mu"));

    m.def("load_scenario",
          [](const std::string& path) { return load_scenario(path).experiment; },
          py::arg("path"));
    m.def("export_result",
          [](const ExperimentResult& r, const std::string& dir, const std::string& fmt) {
              export_result(r, dir, fmt == "json" ? ExportFormat::kJson : ExportFormat::kCsv);
          },
          py::arg("result"), py::arg("directory"), py::arg("format") = "csv");
    m.def("import_result", &import_result, py::arg("json_path"));
    m.def("run_verify_suite", [](const std::string& name) {
        std::ostringstream out;
        const bool ok = run_verify_suite(name, out);
        return py::make_tuple(ok, out.str());
    });
}
