#pragma once

#include <string>

#include "cqcap/experiment.hpp"

namespace cqcap {

enum class ReportFormat { Json, Csv };

// Accepts "json" or "csv".
ReportFormat parse_report_format(const std::string& name);

// Structured report: full config echo plus all per-trial data. Numbers keep
// full binary precision via shortest-round-trip rendering. Timing is left
// out so equal seeds give equal bytes.
std::string render_simulation_json(const SimulationReport& report);

// Tabular report, one row per trial, 9 significant digits.
std::string render_simulation_csv(const SimulationReport& report);

// Writes through a temp file and renames, so failed runs never leave a
// partial file behind.
void write_text_atomic(const std::string& text, const std::string& path);

} // namespace cqcap
