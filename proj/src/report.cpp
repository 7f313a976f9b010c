#include "gitrank/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>

#include "gitrank/errors.hpp"

namespace gitrank {

std::vector<std::string> report_columns(int verbosity) {
  std::vector<std::string> cols = {"rank", "name", "overall"};
  if (verbosity >= 1) {
    cols.insert(cols.end(), {"quality", "maintainability", "popularity"});
  }
  if (verbosity >= 2) {
    for (const Measure m : kAllMeasures) cols.emplace_back(slug(m));
  }
  return cols;
}

std::string format_score(double value) { return fmt::format("{:.2f}", value); }

std::string format_measure(double value) {
  if (std::abs(value) < 1e15 && value == std::trunc(value)) return fmt::format("{:.0f}", value);
  return fmt::format("{:.4g}", value);
}

std::vector<std::vector<std::string>> report_rows(const RankingResult& result, int verbosity) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.ranked.size());
  for (const auto& r : result.ranked) {
    std::vector<std::string> row = {std::to_string(r.rank), r.card.name,
                                    format_score(r.card.overall)};
    if (verbosity >= 1) {
      row.push_back(format_score(r.card.quality));
      row.push_back(format_score(r.card.maintainability));
      row.push_back(format_score(r.card.popularity));
    }
    if (verbosity >= 2) {
      for (const Measure m : kAllMeasures) row.push_back(format_measure(r.measures[m]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// RFC 4180: quote fields holding a comma, quote or line break; double quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void csv_line(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

constexpr std::string_view kStyle = R"(body{font-family:sans-serif;margin:2em;color:#222}
table{border-collapse:collapse;font-size:0.9em}
th,td{border:1px solid #ccc;padding:4px 8px}
th{background:#eee;cursor:pointer;user-select:none}
td.num{text-align:right;font-variant-numeric:tabular-nums}
tbody tr:nth-child(even){background:#f8f8f8}
.meta{color:#555})";

constexpr std::string_view kSortScript = R"(document.querySelectorAll('table.ranking th').forEach(function(th, col) {
  th.addEventListener('click', function() {
    var body = th.closest('table').tBodies[0];
    var rows = Array.prototype.slice.call(body.rows);
    var asc = th.getAttribute('data-order') !== 'asc';
    th.setAttribute('data-order', asc ? 'asc' : 'desc');
    rows.sort(function(a, b) {
      var x = a.cells[col].textContent, y = b.cells[col].textContent;
      var nx = parseFloat(x), ny = parseFloat(y);
      var c = (!isNaN(nx) && !isNaN(ny)) ? nx - ny : x.localeCompare(y);
      return asc ? c : -c;
    });
    rows.forEach(function(r) { body.appendChild(r); });
  });
});)";

}  // namespace

void write_csv(std::ostream& out, const RankingResult& result, int verbosity) {
  csv_line(out, report_columns(verbosity));
  for (const auto& row : report_rows(result, verbosity)) csv_line(out, row);
}

void write_html(std::ostream& out, const RankingResult& result, int verbosity) {
  const auto columns = report_columns(verbosity);
  std::string evaluated;
  for (const auto& t : result.evaluated_at) {
    if (!evaluated.empty()) evaluated += ", ";
    evaluated += t;
  }

  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>GitRank report</title>\n<style>\n" << kStyle << "\n</style>\n</head>\n<body>\n"
      << "<h1>Repository ranking</h1>\n"
      << "<p class=\"meta\">Evaluated at: " << html_escape(evaluated)
      << " &middot; Ranked: " << result.ranked.size()
      << " &middot; Dropped: " << result.dropped.size() << "</p>\n"
      << "<table class=\"ranking\">\n<thead>\n<tr>";
  for (const auto& c : columns) out << "<th>" << html_escape(c) << "</th>";
  out << "</tr>\n</thead>\n<tbody>\n";
  for (const auto& row : report_rows(result, verbosity)) {
    out << "<tr>";
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i == 1 ? "<td>" : "<td class=\"num\">") << html_escape(row[i]) << "</td>";
    }
    out << "</tr>\n";
  }
  out << "</tbody>\n</table>\n";
  out << "<footer>\n";
  if (!result.dropped.empty()) {
    out << "<h2>Dropped repositories</h2>\n<ul class=\"dropped\">\n";
    for (const auto& d : result.dropped) {
      out << "<li><strong>" << html_escape(d.name) << "</strong>: " << html_escape(d.reason)
          << "</li>\n";
    }
    out << "</ul>\n";
  }
  out << "</footer>\n<script>\n" << kSortScript << "\n</script>\n</body>\n</html>\n";
}

namespace {

template <typename Writer>
void emit(const RankingResult& result, int verbosity, const std::filesystem::path& path,
          Writer write) {
  if (result.ranked.empty()) throw IoError("refusing to write an empty ranking");
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write(out, result, verbosity);
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

}  // namespace

void emit_csv(const RankingResult& result, int verbosity, const std::filesystem::path& out) {
  emit(result, verbosity, out, write_csv);
}

void emit_html(const RankingResult& result, int verbosity, const std::filesystem::path& out) {
  emit(result, verbosity, out, write_html);
}

}  // namespace gitrank
