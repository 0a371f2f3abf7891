#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hotspot/simulator.hpp"

namespace hotspot {

/// Reads and validates a scenario file. See docs/scenario-format.md for the
/// grammar. Errors are ParseError (syntax, unknown keys, bad numbers; the
/// message names the line and field) or ValidationError (cross-references and
/// invariants).
Scenario parse_scenario(const std::filesystem::path& path);

/// Same, from text. Model `file:` includes resolve against base_dir.
Scenario parse_scenario_text(std::string_view text,
                             const std::filesystem::path& base_dir = std::filesystem::path{"."});

/// Parses a standalone WNIC model document.
WnicModel parse_model_file(const std::filesystem::path& path);

/// Emits a scenario in the same grammar, models inlined. Parsing the output
/// yields a Scenario equal to the input.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace hotspot
