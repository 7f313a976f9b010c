#include "gitrank/style.hpp"

#include <algorithm>
#include <map>
#include <regex>

#include "gitrank/errors.hpp"
#include "gitrank/lexer.hpp"

namespace gitrank {

namespace {

bool is_builtin(std::string_view id) {
  return id == style_rule::kLineLength || id == style_rule::kTabIndentation ||
         id == style_rule::kTrailingWhitespace || id == style_rule::kMissingFinalNewline ||
         id == style_rule::kMultipleStatements;
}

std::size_t code_points(std::string_view line) {
  return static_cast<std::size_t>(std::count_if(line.begin(), line.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    auto line = text.substr(start, end - start);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// Per line count of `;` that end statements (for-header semicolons excluded).
std::map<std::size_t, std::size_t> statement_terminators(std::span<const Token> tokens) {
  std::map<std::size_t, std::size_t> per_line;
  int paren_depth = 0;
  bool pending_for = false;
  std::vector<int> for_headers;
  for (const Token& tok : tokens) {
    if (!tok.significant()) continue;
    if (tok.is(TokenKind::Keyword, "for")) {
      pending_for = true;
      continue;
    }
    if (tok.is(TokenKind::Punctuation, "(")) {
      ++paren_depth;
      if (pending_for) for_headers.push_back(paren_depth);
    } else if (tok.is(TokenKind::Punctuation, ")")) {
      if (!for_headers.empty() && for_headers.back() == paren_depth) for_headers.pop_back();
      --paren_depth;
    } else if (tok.is(TokenKind::Punctuation, ";") && for_headers.empty()) {
      ++per_line[tok.line];
    }
    pending_for = false;
  }
  return per_line;
}

}  // namespace

StyleRuleset StyleRuleset::defaults() {
  StyleRuleset set;
  set.rules = {
      {std::string(style_rule::kLineLength), "line longer than the column limit", true, {}},
      {std::string(style_rule::kTabIndentation), "tab character in indentation", true, {}},
      {std::string(style_rule::kTrailingWhitespace), "whitespace at end of line", true, {}},
      {std::string(style_rule::kMissingFinalNewline), "file does not end with a newline", true,
       {}},
      {std::string(style_rule::kMultipleStatements), "more than one statement on a line", true,
       {}},
  };
  return set;
}

bool StyleRuleset::enabled(std::string_view id) const {
  return std::any_of(rules.begin(), rules.end(),
                     [&](const StyleRule& r) { return r.enabled && r.id == id; });
}

void StyleRuleset::set_enabled(std::string_view id, bool on) {
  for (auto& rule : rules) {
    if (rule.id == id) {
      rule.enabled = on;
      return;
    }
  }
  throw ConfigError("unknown style rule '" + std::string(id) + "'");
}

void StyleRuleset::add_pattern_rule(std::string id, std::string pattern) {
  if (is_builtin(id)) throw ConfigError("style rule '" + id + "' is built in");
  try {
    std::regex check(pattern);
  } catch (const std::regex_error& e) {
    throw ConfigError("style rule '" + id + "': bad pattern: " + e.what());
  }
  for (auto& rule : rules) {
    if (rule.id == id) {
      rule.pattern = std::move(pattern);
      rule.enabled = true;
      return;
    }
  }
  rules.push_back(StyleRule{id, "custom pattern", true, std::move(pattern)});
}

std::vector<StyleFinding> lint_file(std::string_view text, const StyleRuleset& ruleset,
                                    std::string_view file) {
  return lint_file(text, tokenize(text), ruleset, file);
}

std::vector<StyleFinding> lint_file(std::string_view text, std::span<const Token> tokens,
                                    const StyleRuleset& ruleset, std::string_view file) {
  std::vector<StyleFinding> findings;
  if (text.empty()) return findings;
  const auto lines = split_lines(text);
  const auto terminators = ruleset.enabled(style_rule::kMultipleStatements)
                               ? statement_terminators(tokens)
                               : std::map<std::size_t, std::size_t>{};

  std::vector<std::pair<const StyleRule*, std::regex>> custom;
  for (const auto& rule : ruleset.rules) {
    if (rule.enabled && !is_builtin(rule.id)) custom.emplace_back(&rule, std::regex(rule.pattern));
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t number = i + 1;
    const auto indent_end = line.find_first_not_of(" \t");
    const std::string_view indent = line.substr(0, indent_end);

    std::size_t next_custom = 0;
    for (const auto& rule : ruleset.rules) {
      if (!rule.enabled) continue;
      bool hit = false;
      if (rule.id == style_rule::kLineLength) {
        hit = code_points(line) > ruleset.max_line_length;
      } else if (rule.id == style_rule::kTabIndentation) {
        hit = indent.find('\t') != std::string_view::npos;
      } else if (rule.id == style_rule::kTrailingWhitespace) {
        hit = !line.empty() && (line.back() == ' ' || line.back() == '\t');
      } else if (rule.id == style_rule::kMissingFinalNewline) {
        hit = number == lines.size() && text.back() != '\n';
      } else if (rule.id == style_rule::kMultipleStatements) {
        const auto it = terminators.find(number);
        hit = it != terminators.end() && it->second > 1;
      } else {
        const auto& re = custom[next_custom++].second;
        hit = std::regex_search(line.begin(), line.end(), re);
      }
      if (hit) findings.push_back(StyleFinding{rule.id, std::string(file), number});
    }
  }
  return findings;
}

double style_density(std::size_t finding_count, std::size_t sloc) {
  if (sloc < 1) throw DomainError("style_density: sloc must be >= 1");
  return static_cast<double>(finding_count) / static_cast<double>(sloc);
}

}  // namespace gitrank
