#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sparsefilt/harness.hpp"
#include "sparsefilt/io.hpp"
#include "sparsefilt/scenario.hpp"
#include "sparsefilt/theory.hpp"
#include "sparsefilt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitIo = 3;
constexpr int kExitTheory = 4;

nlohmann::json load_raw_scenario(const std::string& path,
                                 const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sparsefilt::ScenarioIoError("cannot read scenario file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
        throw sparsefilt::ScenarioSchemaError("scenario is not valid JSON: " + path);
    for (const auto& o : overrides) sparsefilt::apply_override(j, o);
    return j;
}

/// Per-algorithm predicted steady-state bias for the bias table. Attractor
/// algorithms get the white-input prediction (the reweighted variant with its
/// per-tap attenuation); baselines are predicted unbiased. Empty for
/// non-white inputs, where the general predictor is exposed via `predict`.
std::vector<std::pair<std::string, sparsefilt::WeightVector>> predicted_bias_columns(
    const sparsefilt::ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, sparsefilt::WeightVector>> out;
    if (!cfg.input.is_white()) return out;
    for (const auto& f : cfg.filters) {
        const std::string name = sparsefilt::algorithm_name(f.algorithm);
        sparsefilt::WeightVector bias =
            sparsefilt::WeightVector::Zero(cfg.system.length());
        if (f.algorithm == sparsefilt::Algorithm::ZA_PNLMS ||
            f.algorithm == sparsefilt::Algorithm::RZA_PNLMS) {
            const auto report = sparsefilt::predict_bias(cfg.system, f.gain_params, f.rho, f.mu,
                                                         cfg.input.variance);
            bias = report.predicted_bias;
            if (f.algorithm == sparsefilt::Algorithm::RZA_PNLMS)
                for (int idx : cfg.system.active_indices)
                    bias[idx] /= 1.0 + f.epsilon * std::abs(cfg.system.weights[idx]);
        }
        out.emplace_back(name, std::move(bias));
    }
    return out;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, bool fail_on_divergence) {
    const auto scenario = sparsefilt::parse_scenario(load_raw_scenario(scenario_path, overrides));
    const auto& cfg = scenario.experiment;
    const auto result = sparsefilt::run_experiment(cfg);

    sparsefilt::export_result(result, out_dir, sparsefilt::ExportFormat::kJson);
    sparsefilt::export_result(result, out_dir, sparsefilt::ExportFormat::kCsv,
                              predicted_bias_columns(cfg));

    bool any_divergence = false;
    for (const auto& alg : result.per_algorithm) {
        const auto msd = sparsefilt::msd_curve(alg);
        std::cout << alg.algorithm << ": trials " << alg.completed_trials << "/" << result.trials
                  << ", final MSD " << sparsefilt::format_double(msd[msd.size() - 1]);
        if (!alg.diverged_trials.empty()) {
            any_divergence = true;
            std::cout << ", diverged trials " << alg.diverged_trials.size();
        }
        std::cout << "\n";
    }
    std::cout << "wrote " << out_dir << "/result.json and CSV tables\n";
    if (any_divergence && fail_on_divergence) {
        std::cerr << "error: at least one trial diverged\n";
        return 1;
    }
    return kExitOk;
}

int cmd_predict(const std::string& scenario_path, const std::string& out_dir,
                const std::vector<std::string>& overrides) {
    const auto scenario = sparsefilt::parse_scenario(load_raw_scenario(scenario_path, overrides));
    const auto& cfg = scenario.experiment;
    const auto& base = cfg.filters.front();

    sparsefilt::SteadyStateReport report;
    if (cfg.input.is_white()) {
        report = sparsefilt::predict_bias(cfg.system, base.gain_params, base.rho, base.mu,
                                          cfg.input.variance);
    } else {
        const Eigen::MatrixXd R = cfg.input.covariance(cfg.system.length());
        const Eigen::MatrixXd S = sparsefilt::steady_s_matrix(cfg.system, base.gain_params, R);
        const auto gbar = sparsefilt::predict_steady_gain(cfg.system, base.gain_params);
        const auto mean = sparsefilt::predict_mean_general(
            cfg.system, S, gbar, base.rho, base.mu,
            sparsefilt::default_sign_expectation(cfg.system));
        report.predicted_mean = mean;
        report.predicted_bias = cfg.system.weights - mean;
        report.steady_gain = gbar;
        report.s_matrix = S;
    }

    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / "report.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << report.to_json().dump(2) << '\n';
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suite) {
    const bool ok = sparsefilt::run_verify_suite(suite, std::cout);
    std::cout << (ok ? "suite passed" : "suite FAILED") << "\n";
    return ok ? kExitOk : 1;
}

int cmd_export(const std::string& result_path, const std::string& out_dir,
               const std::string& format) {
    const auto result = sparsefilt::import_result(result_path);
    if (format == "csv") {
        sparsefilt::export_result(result, out_dir, sparsefilt::ExportFormat::kCsv);
    } else if (format == "json") {
        sparsefilt::export_result(result, out_dir, sparsefilt::ExportFormat::kJson);
    } else {
        std::cerr << "error: format must be csv or json\n";
        return kExitSchema;
    }
    std::cout << "wrote " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparsefilt: sparse system identification with proportionate adaptive filters"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string result_path;
    std::string format = "csv";
    std::string suite;
    std::vector<std::string> overrides;
    std::string stride_override;
    std::string seed_override;
    bool fail_on_divergence = false;

    auto* run = app.add_subcommand("run", "run a Monte-Carlo experiment scenario");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--override", overrides, "key=value scenario override, repeatable");
    run->add_option("--stride", stride_override, "snapshot stride override");
    run->add_option("--seed", seed_override, "base seed override");
    run->add_flag("--fail-on-divergence", fail_on_divergence,
                  "exit nonzero when any trial diverges");

    auto* predict = app.add_subcommand("predict", "steady-state mean prediction for a scenario");
    predict->add_option("scenario", scenario_path, "scenario JSON file")->required();
    predict->add_option("--out", out_dir, "output directory (default: out)");
    predict->add_option("--override", overrides, "key=value scenario override, repeatable");

    auto* verify = app.add_subcommand("verify", "run a fixed-seed verification suite");
    verify->add_option("suite", suite, "one of: transform, discretization, reductions, projection")
        ->required();

    auto* exp = app.add_subcommand("export", "convert a stored result.json");
    exp->add_option("result", result_path, "result.json produced by run")->required();
    exp->add_option("--out", out_dir, "output directory (default: out)");
    exp->add_option("--format", format, "csv or json (default: csv)");

    CLI11_PARSE(app, argc, argv);

    if (!stride_override.empty()) overrides.push_back("stride=" + stride_override);
    if (!seed_override.empty()) overrides.push_back("seed=" + seed_override);

    try {
        if (run->parsed()) return cmd_run(scenario_path, out_dir, overrides, fail_on_divergence);
        if (predict->parsed()) return cmd_predict(scenario_path, out_dir, overrides);
        if (verify->parsed()) return cmd_verify(suite);
        if (exp->parsed()) return cmd_export(result_path, out_dir, format);
    } catch (const sparsefilt::ScenarioIoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const sparsefilt::ScenarioSchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << " (stable range is 0 < mu < 2)\n";
        return kExitTheory;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
