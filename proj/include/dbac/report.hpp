#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dbac/metrics.hpp"

namespace dbac {

// Mean/std/CI over per-run scores; tolerates n == 1 (std and CI are 0 then).
StatSummary summarize_runs(const std::vector<double>& scores);

// {"mean":..,"sample_std":..,"ci_halfwidth":..,"n":..,"per_seed":[..]}
nlohmann::json stats_json(const StatSummary& s, const std::vector<double>& per_seed);

// Subscript-CI cell with an optional scale factor, e.g. scale=100 for the
// "x100" table convention: format_scaled_ci(0.1234, 0.0056, 100, 2) ->
// "12.34_{0.56}".
std::string format_scaled_ci(double mean, double ci_halfwidth, double scale, int decimals);

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dbac
