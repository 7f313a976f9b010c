#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitrank/lexer.hpp"

namespace gitrank {

namespace style_rule {
inline constexpr std::string_view kLineLength = "line-length";
inline constexpr std::string_view kTabIndentation = "tab-indentation";
inline constexpr std::string_view kTrailingWhitespace = "trailing-whitespace";
inline constexpr std::string_view kMissingFinalNewline = "missing-final-newline";
inline constexpr std::string_view kMultipleStatements = "multiple-statements";
}  // namespace style_rule

/// A lint rule. Built-in ids are the style_rule constants; any other id is a
/// custom rule that flags every line matching `pattern` (ECMAScript regex).
struct StyleRule {
  std::string id;
  std::string description;
  bool enabled{true};
  std::string pattern;
};

struct StyleRuleset {
  std::vector<StyleRule> rules;
  std::size_t max_line_length{120};

  static StyleRuleset defaults();
  [[nodiscard]] bool enabled(std::string_view id) const;
  /// Throws ConfigError on an unknown built-in id.
  void set_enabled(std::string_view id, bool on);
  /// Adds or replaces a custom regex rule. Throws ConfigError on a bad pattern
  /// or when `id` names a built-in rule.
  void add_pattern_rule(std::string id, std::string pattern);
};

struct StyleFinding {
  std::string rule_id;
  std::string file;
  std::size_t line{0};

  bool operator==(const StyleFinding&) const = default;
};

/// One finding per (enabled rule, violating line), ordered by line then rule
/// order in the ruleset. Line length counts UTF-8 code points.
std::vector<StyleFinding> lint_file(std::string_view text, const StyleRuleset& ruleset,
                                    std::string_view file = {});
/// Same, reusing `tokens == tokenize(text)`.
std::vector<StyleFinding> lint_file(std::string_view text, std::span<const Token> tokens,
                                    const StyleRuleset& ruleset, std::string_view file = {});

/// finding_count / sloc. Throws DomainError when sloc < 1.
double style_density(std::size_t finding_count, std::size_t sloc);

}  // namespace gitrank
