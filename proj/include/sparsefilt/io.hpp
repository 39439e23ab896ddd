#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsefilt/harness.hpp"
#include "sparsefilt/signal.hpp"

#include "json.hpp"

namespace sparsefilt {

/// Shortest text form of a double that parses back to the same bits
/// (17 significant digits, '.' decimal separator).
std::string format_double(double v);

/// One value per line, LF endings.
void write_values_csv(const std::string& path, const Eigen::VectorXd& values);
Eigen::VectorXd read_values_csv(const std::string& path);

void write_buffer_csv(const std::string& path, const SignalBuffer& buffer);
SignalBuffer read_buffer_csv(const std::string& path);

void write_system_csv(const std::string& path, const SparseSystem& system);
SparseSystem read_system_csv(const std::string& path);

nlohmann::json input_model_to_json(const InputModel& input);
InputModel input_model_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

enum class ExportFormat { kCsv, kJson };

/// Writes the result under `directory`. JSON: result.json mirroring
/// ExperimentResult. CSV: curves.csv (n,alg,tap,value: averaged weight
/// learning curves), msd.csv and emse.csv (same header, tap = -1 aggregate
/// rows), bias.csv (alg,tap,w_opt,bias,predicted_bias for active taps).
/// `predicted_bias` entries are matched by algorithm name; missing entries
/// leave the column empty.
void export_result(const ExperimentResult& result, const std::string& directory,
                   ExportFormat format,
                   const std::vector<std::pair<std::string, WeightVector>>& predicted_bias = {});

ExperimentResult import_result(const std::string& json_path);

}  // namespace sparsefilt
