#pragma once

#include <iosfwd>
#include <string>

namespace sparsefilt {

/// Fixed-seed property suites behind the `verify` CLI command. Each prints
/// one line per invariant and returns true iff all of them hold.
bool verify_reductions(std::ostream& out);
bool verify_transform(std::ostream& out);
bool verify_discretization(std::ostream& out);
bool verify_projection(std::ostream& out);

/// Dispatch by suite name ("reductions", "transform", "discretization",
/// "projection"). Throws std::invalid_argument for unknown names.
bool run_verify_suite(const std::string& name, std::ostream& out);

}  // namespace sparsefilt
