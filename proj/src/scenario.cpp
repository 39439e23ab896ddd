#include "sparsefilt/scenario.hpp"

#include <fstream>

#include "sparsefilt/io.hpp"

namespace sparsefilt {

void apply_override(nlohmann::json& scenario, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ScenarioSchemaError("override must look like key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // plain string
    scenario[key] = value;
}

namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioSchemaError(std::string("missing required key: ") + key);
    return *it;
}

double require_number(const nlohmann::json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number()) throw ScenarioSchemaError(std::string("key must be numeric: ") + key);
    return v.get<double>();
}

long require_integer(const nlohmann::json& j, const char* key) {
    const auto& v = require(j, key);
    if (!v.is_number_integer())
        throw ScenarioSchemaError(std::string("key must be an integer: ") + key);
    return v.get<long>();
}

double optional_number(const nlohmann::json& j, const char* key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ScenarioSchemaError(std::string("key must be numeric: ") + key);
    return it->get<double>();
}

std::vector<std::pair<int, double>> parse_taps(const nlohmann::json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "default") return default_active_taps();
        throw ScenarioSchemaError("active_taps: unknown preset '" + v.get<std::string>() + "'");
    }
    if (!v.is_array()) throw ScenarioSchemaError("active_taps must be an array or \"default\"");
    std::vector<std::pair<int, double>> taps;
    for (const auto& entry : v) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
            !entry[1].is_number())
            throw ScenarioSchemaError("active_taps entries must be [index, value] pairs");
        taps.emplace_back(entry[0].get<int>(), entry[1].get<double>());
    }
    return taps;
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw ScenarioSchemaError("scenario must be a JSON object");

    Scenario s;
    auto& cfg = s.experiment;

    const long length = require_integer(j, "l");
    if (length < 1) throw ScenarioSchemaError("l must be >= 1");
    try {
        cfg.system = gen_sparse_system(static_cast<int>(length), parse_taps(require(j, "active_taps")));
    } catch (const std::invalid_argument& e) {
        throw ScenarioSchemaError(std::string("active_taps: ") + e.what());
    }

    const auto& input = require(j, "input");
    try {
        cfg.input = input_model_from_json(input);
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioSchemaError(std::string("input: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ScenarioSchemaError(std::string("input: ") + e.what());
    }
    if (cfg.input.is_white()) {
        if (cfg.input.variance < 0.0) throw ScenarioSchemaError("input.variance must be >= 0");
    } else if (!(std::abs(cfg.input.pole) < 1.0) || cfg.input.innovation_variance < 0.0) {
        throw ScenarioSchemaError("input: need |pole| < 1 and innovation_variance >= 0");
    }

    cfg.sigma_v2 = require_number(j, "sigma_v2");
    cfg.iterations = require_integer(j, "iterations");
    cfg.trials = static_cast<int>(require_integer(j, "trials"));
    cfg.base_seed = static_cast<std::uint64_t>(require_integer(j, "seed"));
    cfg.stride = static_cast<int>(j.value("stride", 10));
    cfg.steady_window = optional_number(j, "steady_window", 0.1);

    FilterConfig base;
    base.mu = require_number(j, "mu");
    base.rho = require_number(j, "rho");
    base.delta_p = require_number(j, "delta_p");
    base.gain_params.rho_g = require_number(j, "rho_g");
    base.gain_params.delta = require_number(j, "delta");
    base.epsilon = optional_number(j, "epsilon", 10.0);
    base.clamp_attractor = j.value("clamp_attractor", false);

    const auto& algs = require(j, "algorithms");
    if (!algs.is_array() || algs.empty())
        throw ScenarioSchemaError("algorithms must be a non-empty array");
    for (const auto& a : algs) {
        if (!a.is_string()) throw ScenarioSchemaError("algorithms entries must be strings");
        FilterConfig f = base;
        try {
            f.algorithm = algorithm_from_name(a.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ScenarioSchemaError(e.what());
        }
        cfg.filters.push_back(f);
    }

    try {
        cfg.validate();
        for (const auto& f : cfg.filters) f.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioSchemaError(e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioIoError("cannot read scenario file: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ScenarioSchemaError("scenario is not valid JSON: " + path);
    return parse_scenario(j);
}

}  // namespace sparsefilt
