#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gitrank/pipeline.hpp"

namespace gitrank {

/// Column headers at a verbosity level: 3, 6 or 20 columns.
std::vector<std::string> report_columns(int verbosity);

/// Category and overall scores: two decimals.
std::string format_score(double value);
/// Raw measures: integers as written, anything else with 4 significant digits.
std::string format_measure(double value);

/// Cell text for every ranked row, shared by the CSV and HTML writers.
std::vector<std::vector<std::string>> report_rows(const RankingResult& result, int verbosity);

void write_csv(std::ostream& out, const RankingResult& result, int verbosity);
void write_html(std::ostream& out, const RankingResult& result, int verbosity);

/// Throws IoError.
void emit_csv(const RankingResult& result, int verbosity, const std::filesystem::path& out);
void emit_html(const RankingResult& result, int verbosity, const std::filesystem::path& out);

}  // namespace gitrank
