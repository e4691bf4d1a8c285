// Deterministic serialization: atomic text writes, CSV tables with
// unit-annotated headers, and JSON round-trips for schedules and protocol
// reports.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydsim/evolve.hpp"
#include "rydsim/hilbert.hpp"
#include "rydsim/protocols.hpp"

namespace rydsim::io {

// Fixed "%.17g" rendering: round-trip exact and byte-stable across runs.
std::string format_double(double v);

// Writes to a temp file in the target directory, then renames into place.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Header row then one line per row, cells rendered via format_double.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);
// Reads a schedule from .json (schedule_to_json layout) or .csv
// (t,f1,f2,alpha1,alpha2 columns with a header row).
Schedule load_schedule(const std::filesystem::path& path);
std::string schedule_csv(const Schedule& schedule);

nlohmann::json state_to_json(const StateVector& state);
nlohmann::json report_to_json(const ProtocolReport& report,
                              const std::string& protocol, int atoms,
                              const nlohmann::json& options);

}  // namespace rydsim::io
