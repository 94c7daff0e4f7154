#pragma once

#include "qprospect_cli/result.hpp"
#include "qprospect_cli/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qprospect::cli {

/// Scenario-driven subcommands, in help order (selftest is handled by the tool).
const std::vector<std::string>& scenario_commands();

/// Runs one subcommand against a parsed scenario. Unknown commands and
/// missing sections are ValidationErrors.
ResultTable run(const std::string& command, const Scenario& scenario, std::uint64_t seed);

}  // namespace qprospect::cli
