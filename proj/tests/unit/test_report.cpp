#include <doctest.h>

#include <regex>
#include <sstream>

#include "../support.hpp"
#include "gitrank/errors.hpp"
#include "gitrank/report.hpp"

using namespace gitrank;

namespace {

RankingResult sample(std::size_t n) {
  std::vector<RepoRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    RepoRecord r;
    r.name = "o/r" + std::to_string(i);
    r.status = RecordStatus::Measured;
    r.evaluated_at = *parse_timestamp("2024-06-01");
    for (const Measure m : kAllMeasures) r.measures[m] = static_cast<double>(i) / 3.0 + static_cast<double>(m);
    records.push_back(r);
  }
  RepoRecord gone;
  gone.name = "o/<gone>";
  gone.drop_reason = "no analyzable source";
  records.push_back(gone);
  return rank_records(records, ScoringOptions{});
}

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t p; (p = csv.find("\r\n", start)) != std::string::npos; start = p + 2) {
    lines.push_back(csv.substr(start, p - start));
  }
  CHECK(start == csv.size());
  return lines;
}

std::size_t field_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("columns per verbosity") {
  CHECK(report_columns(0) == std::vector<std::string>{"rank", "name", "overall"});
  CHECK(report_columns(1).size() == 6);
  CHECK(report_columns(2).size() == 20);
  CHECK(report_columns(2)[6] == "avg_cc");
}

TEST_CASE("number formatting") {
  CHECK(format_score(55) == "55.00");
  CHECK(format_score(23.3333333) == "23.33");
  CHECK(format_measure(3) == "3");
  CHECK(format_measure(0) == "0");
  CHECK(format_measure(2.0 / 3.0) == "0.6667");
  CHECK(format_measure(123.456) == "123.5");
  CHECK(format_measure(0.000123456) == "0.0001235");
}

TEST_CASE("csv shape") {
  const auto result = sample(2);
  for (const int v : {0, 1, 2}) {
    std::ostringstream out;
    write_csv(out, result, v);
    const auto lines = csv_lines(out.str());
    REQUIRE(lines.size() == 3);
    for (const auto& l : lines) CHECK(field_count(l) == (v == 0 ? 3U : v == 1 ? 6U : 20U));
  }
}

TEST_CASE("csv quoting") {
  auto result = sample(1);
  result.ranked[0].card.name = "odd,\"name\"";
  std::ostringstream out;
  write_csv(out, result, 0);
  CHECK(out.str().find("\"odd,\"\"name\"\"\"") != std::string::npos);
}

TEST_CASE("html mirrors csv values") {
  const auto result = sample(5);
  std::ostringstream csv, html;
  write_csv(csv, result, 2);
  write_html(html, result, 2);
  const std::string page = html.str();
  CHECK(page.find("http://") == std::string::npos);
  CHECK(page.find("https://") == std::string::npos);
  CHECK(page.find("<script src") == std::string::npos);
  CHECK(page.find("o/&lt;gone&gt;") != std::string::npos);
  CHECK(page.find("no analyzable source") != std::string::npos);
  CHECK(page.find("2024-06-01T00:00:00Z") != std::string::npos);

  const std::regex row("<tr>(.*?)</tr>");
  const std::regex cell("<t[dh][^>]*>([^<]*)</t[dh]>");
  std::vector<std::string> html_lines;
  for (std::sregex_iterator r(page.begin(), page.end(), row), end; r != end; ++r) {
    const std::string inner = (*r)[1];
    std::string joined;
    for (std::sregex_iterator c(inner.begin(), inner.end(), cell); c != end; ++c) {
      if (!joined.empty()) joined += ',';
      joined += (*c)[1];
    }
    html_lines.push_back(joined);
  }
  CHECK(html_lines == csv_lines(csv.str()));
  CHECK(html_lines.size() == 6);
}

TEST_CASE("emitting files") {
  test::TempDir tmp;
  const auto result = sample(3);
  emit_csv(result, 1, tmp.path() / "out" / "r.csv");
  emit_html(result, 1, tmp.path() / "out" / "r.html");
  CHECK(test::read_file(tmp.path() / "out" / "r.csv").starts_with("rank,name,overall,quality"));
  CHECK(test::read_file(tmp.path() / "out" / "r.html").starts_with("<!DOCTYPE html>"));
  CHECK_THROWS_AS(emit_csv(result, 0, tmp.path() / "out" / "r.csv" / "x.csv"), IoError);
  CHECK_THROWS_AS(emit_csv(RankingResult{}, 0, tmp.path() / "e.csv"), IoError);
}

}  // TEST_SUITE
