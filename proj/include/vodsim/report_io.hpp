#pragma once

#include <string>

#include "json.hpp"
#include "vodsim/metrics.hpp"

namespace vodsim {

// Reports parse back bit-for-bit: report_from_json(report_to_json(r)) == r.
nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

void write_report(const Report& report, const std::string& path);
Report read_report(const std::string& path);

// Flat per-node table. Nested logs stay JSON-only.
std::string report_to_csv(const Report& report);

nlohmann::json compare_to_json(const CompareSummary& c, const Scenario& scenario);

}  // namespace vodsim
