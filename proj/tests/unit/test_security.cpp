#include <doctest.h>

#include "gitrank/errors.hpp"
#include "gitrank/security.hpp"

using namespace gitrank;

namespace {

std::vector<SecurityFinding> scan(std::string_view text) {
  return scan_file(tokenize(text), SecurityRuleset::defaults(), "t.c");
}

SecurityFinding finding(Severity s) { return SecurityFinding{SecurityRule{"f", s, ""}, "", 1}; }

}  // namespace

TEST_SUITE("security") {

TEST_CASE("scan examples") {
  const auto hits = scan("gets(buf);");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].rule.function_name == "gets");
  CHECK(hits[0].rule.severity == Severity::High);
  CHECK(hits[0].line == 1);
  CHECK(hits[0].file == "t.c");
  CHECK(scan("int gets_value;").empty());
  CHECK(scan("return 0;").empty());
}

TEST_CASE("call sites only") {
  CHECK(scan("char *(*fp)(char *) = gets;").empty());
  CHECK(scan("x.strcpy_safe(a, b);").empty());
  CHECK(scan("const char *s = \"strcpy(a, b)\"; // system(cmd)\n/* gets(b) */").empty());
  CHECK(scan("#define COPY strcpy(a, b)\n").empty());
  const auto spaced = scan("\n\nsystem /* why */ (cmd);");
  REQUIRE(spaced.size() == 1);
  CHECK(spaced[0].line == 3);
  CHECK(spaced[0].rule.severity == Severity::High);
}

TEST_CASE("every bundled rule is found once") {
  const auto rules = SecurityRuleset::defaults();
  std::string text;
  for (const auto& r : rules.rules()) text += "  " + r.function_name + "(x);\n";
  const auto hits = scan_file(tokenize(text), rules);
  REQUIRE(hits.size() == rules.rules().size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    CHECK(hits[i].rule.function_name == rules.rules()[i].function_name);
    CHECK(hits[i].rule.severity == rules.rules()[i].severity);
    CHECK(hits[i].line == i + 1);
  }
}

TEST_CASE("ruleset edits") {
  auto rules = SecurityRuleset::defaults();
  REQUIRE(rules.find("strlen") != nullptr);
  CHECK(rules.find("strlen")->severity == Severity::Low);
  rules.add({"strlen", Severity::High, "escalated"});
  CHECK(rules.find("strlen")->severity == Severity::High);
  rules.add({"my_alloc", Severity::Medium, "custom"});
  CHECK(scan_file(tokenize("my_alloc(4);"), rules).size() == 1);
  CHECK(rules.remove("gets"));
  CHECK_FALSE(rules.remove("gets"));
  CHECK(scan_file(tokenize("gets(b);"), rules).empty());
}

TEST_CASE("densities") {
  const auto zero = security_densities({}, 1000);
  CHECK(zero.low == 0.0);
  CHECK(zero.medium == 0.0);
  CHECK(zero.high == 0.0);

  const std::vector<SecurityFinding> mixed = {finding(Severity::High), finding(Severity::High),
                                              finding(Severity::Low)};
  const auto d = security_densities(mixed, 100);
  CHECK(d.low == doctest::Approx(0.01));
  CHECK(d.medium == 0.0);
  CHECK(d.high == doctest::Approx(0.02));
  CHECK(d.low + d.medium + d.high == doctest::Approx(3.0 / 100));

  const std::vector<SecurityFinding> medium(3, finding(Severity::Medium));
  const auto m = security_densities(medium, 3);
  CHECK(m.low == 0.0);
  CHECK(m.medium == 1.0);
  CHECK(m.high == 0.0);

  CHECK_THROWS_AS(security_densities(mixed, 0), DomainError);
}

}  // TEST_SUITE
