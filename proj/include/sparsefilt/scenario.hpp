#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparsefilt/harness.hpp"

#include "json.hpp"

namespace sparsefilt {

struct ScenarioIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioSchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed experiment scenario. Every listed algorithm shares the scalar
/// parameters (mu, rho, delta_p, rho_g, delta, epsilon).
struct Scenario {
    ExperimentConfig experiment;
};

/// Apply a `key=value` override onto the raw scenario JSON. The value is
/// parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& scenario, const std::string& assignment);

/// Validate and convert raw scenario JSON. Throws ScenarioSchemaError with
/// the offending key in the message.
Scenario parse_scenario(const nlohmann::json& j);

/// Load from disk. Throws ScenarioIoError when the file cannot be read and
/// ScenarioSchemaError when it does not parse or validate.
Scenario load_scenario(const std::string& path);

}  // namespace sparsefilt
