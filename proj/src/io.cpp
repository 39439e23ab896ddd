#include "sparsefilt/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sparsefilt {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_values_csv(const std::string& path, const Eigen::VectorXd& values) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values[i]) << '\n';
}

Eigen::VectorXd read_values_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        values.push_back(std::stod(line));
    }
    return from_std(values);
}

void write_buffer_csv(const std::string& path, const SignalBuffer& buffer) {
    write_values_csv(path, buffer.samples);
}

SignalBuffer read_buffer_csv(const std::string& path) {
    SignalBuffer buf;
    buf.samples = read_values_csv(path);
    return buf;
}

void write_system_csv(const std::string& path, const SparseSystem& system) {
    write_values_csv(path, system.weights);
}

SparseSystem read_system_csv(const std::string& path) {
    const Eigen::VectorXd w = read_values_csv(path);
    std::vector<std::pair<int, double>> taps;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) taps.emplace_back(static_cast<int>(i), w[i]);
    return gen_sparse_system(static_cast<int>(w.size()), taps);
}

nlohmann::json input_model_to_json(const InputModel& input) {
    nlohmann::json j;
    if (input.is_white()) {
        j["model"] = "white";
        j["variance"] = input.variance;
    } else {
        j["model"] = "ar1";
        j["pole"] = input.pole;
        j["innovation_variance"] = input.innovation_variance;
    }
    return j;
}

InputModel input_model_from_json(const nlohmann::json& j) {
    InputModel input;
    const std::string model = j.at("model").get<std::string>();
    if (model == "white") {
        input.kind = InputModel::Kind::kWhite;
        input.variance = j.at("variance").get<double>();
    } else if (model == "ar1") {
        input.kind = InputModel::Kind::kAr1;
        input.pole = j.at("pole").get<double>();
        input.innovation_variance = j.at("innovation_variance").get<double>();
    } else {
        throw std::invalid_argument("input model must be 'white' or 'ar1'");
    }
    return input;
}

nlohmann::json result_to_json(const ExperimentResult& result) {
    nlohmann::json j;
    j["length"] = result.length;
    j["w_opt"] = to_std(result.w_opt);
    j["input"] = input_model_to_json(result.input);
    j["sigma_v2"] = result.sigma_v2;
    j["iterations"] = result.iterations;
    j["trials"] = result.trials;
    j["stride"] = result.stride;
    j["steady_window"] = result.steady_window;
    j["base_seed"] = result.base_seed;
    nlohmann::json algs = nlohmann::json::array();
    for (const auto& a : result.per_algorithm) {
        nlohmann::json ja;
        ja["algorithm"] = a.algorithm;
        ja["snapshot_iters"] = a.snapshot_iters;
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < a.mean_weights.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < a.mean_weights.cols(); ++c)
                row.push_back(a.mean_weights(r, c));
            rows.push_back(std::move(row));
        }
        ja["mean_weights"] = std::move(rows);
        ja["mean_sq_dev"] = to_std(a.mean_sq_dev);
        ja["mean_sq_error"] = to_std(a.mean_sq_error);
        ja["steady_mean_weights"] = to_std(a.steady_mean_weights);
        ja["bias"] = to_std(a.bias);
        ja["diverged_trials"] = a.diverged_trials;
        ja["completed_trials"] = a.completed_trials;
        algs.push_back(std::move(ja));
    }
    j["algorithms"] = std::move(algs);
    return j;
}

ExperimentResult result_from_json(const nlohmann::json& j) {
    ExperimentResult result;
    result.length = j.at("length").get<int>();
    result.w_opt = from_std(j.at("w_opt").get<std::vector<double>>());
    result.input = input_model_from_json(j.at("input"));
    result.sigma_v2 = j.at("sigma_v2").get<double>();
    result.iterations = j.at("iterations").get<long>();
    result.trials = j.at("trials").get<int>();
    result.stride = j.at("stride").get<int>();
    result.steady_window = j.at("steady_window").get<double>();
    result.base_seed = j.at("base_seed").get<std::uint64_t>();
    for (const auto& ja : j.at("algorithms")) {
        AlgorithmResult a;
        a.algorithm = ja.at("algorithm").get<std::string>();
        a.snapshot_iters = ja.at("snapshot_iters").get<std::vector<long>>();
        const auto& rows = ja.at("mean_weights");
        a.mean_weights.resize(static_cast<Eigen::Index>(rows.size()), result.length);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                a.mean_weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    rows[r][c].get<double>();
        a.mean_sq_dev = from_std(ja.at("mean_sq_dev").get<std::vector<double>>());
        a.mean_sq_error = from_std(ja.at("mean_sq_error").get<std::vector<double>>());
        a.steady_mean_weights = from_std(ja.at("steady_mean_weights").get<std::vector<double>>());
        a.bias = from_std(ja.at("bias").get<std::vector<double>>());
        a.diverged_trials = ja.at("diverged_trials").get<std::vector<int>>();
        a.completed_trials = ja.at("completed_trials").get<int>();
        result.per_algorithm.push_back(std::move(a));
    }
    return result;
}

namespace {

void write_curves_csv(const ExperimentResult& result, const std::string& path) {
    auto out = open_out(path);
    out << "n,alg,tap,value\n";
    for (const auto& a : result.per_algorithm) {
        for (std::size_t r = 0; r < a.snapshot_iters.size(); ++r)
            for (Eigen::Index c = 0; c < a.mean_weights.cols(); ++c)
                out << a.snapshot_iters[r] << ',' << a.algorithm << ',' << c << ','
                    << format_double(a.mean_weights(static_cast<Eigen::Index>(r), c)) << '\n';
    }
}

void write_metric_csv(const ExperimentResult& result, const std::string& path, bool emse) {
    auto out = open_out(path);
    out << "n,alg,tap,value\n";  // tap = -1: aggregate metric, not a tap curve
    for (const auto& a : result.per_algorithm) {
        if (emse) {
            const Eigen::VectorXd curve = emse_curve(a, result.sigma_v2);
            for (Eigen::Index n = 0; n < curve.size(); ++n)
                out << n << ',' << a.algorithm << ",-1," << format_double(curve[n]) << '\n';
        } else {
            const Eigen::VectorXd curve = msd_curve(a);
            for (std::size_t r = 0; r < a.snapshot_iters.size(); ++r)
                out << a.snapshot_iters[r] << ',' << a.algorithm << ",-1,"
                    << format_double(curve[static_cast<Eigen::Index>(r)]) << '\n';
        }
    }
}

void write_bias_csv(const ExperimentResult& result, const std::string& path,
                    const std::vector<std::pair<std::string, WeightVector>>& predicted) {
    auto out = open_out(path);
    out << "alg,tap,w_opt,bias,predicted_bias\n";
    for (const auto& a : result.per_algorithm) {
        const WeightVector* pred = nullptr;
        for (const auto& [name, vec] : predicted)
            if (name == a.algorithm) pred = &vec;
        for (Eigen::Index i = 0; i < result.w_opt.size(); ++i) {
            if (result.w_opt[i] == 0.0) continue;
            out << a.algorithm << ',' << i << ',' << format_double(result.w_opt[i]) << ','
                << format_double(a.bias[i]) << ',';
            if (pred) out << format_double((*pred)[i]);
            out << '\n';
        }
    }
}

}  // namespace

void export_result(const ExperimentResult& result, const std::string& directory,
                   ExportFormat format,
                   const std::vector<std::pair<std::string, WeightVector>>& predicted_bias) {
    std::filesystem::create_directories(directory);
    const std::filesystem::path dir(directory);
    if (format == ExportFormat::kJson) {
        auto out = open_out((dir / "result.json").string());
        out << result_to_json(result).dump(2) << '\n';
        return;
    }
    write_curves_csv(result, (dir / "curves.csv").string());
    write_metric_csv(result, (dir / "msd.csv").string(), /*emse=*/false);
    write_metric_csv(result, (dir / "emse.csv").string(), /*emse=*/true);
    write_bias_csv(result, (dir / "bias.csv").string(), predicted_bias);
}

ExperimentResult import_result(const std::string& json_path) {
    auto in = open_in(json_path);
    nlohmann::json j;
    in >> j;
    return result_from_json(j);
}

}  // namespace sparsefilt
