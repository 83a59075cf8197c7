#pragma once

#include <string>

#include "json.hpp"
#include "vodsim/scenario.hpp"

namespace vodsim {

// Parsing is strict: unknown fields anywhere in the document are errors,
// so a typo cannot silently fall back to a default.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::string& path);

}  // namespace vodsim
