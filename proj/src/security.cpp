#include "gitrank/security.hpp"

#include <algorithm>

#include "gitrank/errors.hpp"

namespace gitrank {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
  }
  return "unknown";
}

SecurityRuleset SecurityRuleset::defaults() {
  SecurityRuleset set;
  const auto add_all = [&](Severity sev, std::initializer_list<std::pair<const char*, const char*>> rows) {
    for (const auto& [name, why] : rows) set.add(SecurityRule{name, sev, why});
  };
  add_all(Severity::High,
          {{"gets", "unbounded read into a fixed buffer"},
           {"strcpy", "no destination bound"},
           {"strcat", "no destination bound"},
           {"sprintf", "no destination bound"},
           {"vsprintf", "no destination bound"},
           {"system", "shell command injection"},
           {"popen", "shell command injection"},
           {"execl", "program execution with caller-controlled path"},
           {"execlp", "PATH lookup of the program"},
           {"execv", "program execution with caller-controlled path"},
           {"execvp", "PATH lookup of the program"}});
  add_all(Severity::Medium,
          {{"scanf", "%s without width overflows"},
           {"sscanf", "%s without width overflows"},
           {"fscanf", "%s without width overflows"},
           {"realpath", "output buffer must be PATH_MAX"},
           {"getwd", "no buffer bound"},
           {"alloca", "unchecked stack allocation"},
           {"mktemp", "predictable temporary file race"},
           {"tmpnam", "predictable temporary file race"}});
  add_all(Severity::Low,
          {{"strlen", "over-read on unterminated input"},
           {"memcpy", "no bound check against destination"},
           {"memmove", "no bound check against destination"},
           {"getenv", "untrusted environment input"},
           {"rand", "not cryptographically secure"},
           {"atoi", "no error detection"},
           {"atol", "no error detection"}});
  return set;
}

const SecurityRule* SecurityRuleset::find(std::string_view function_name) const {
  const auto it = std::find_if(rules_.begin(), rules_.end(), [&](const SecurityRule& r) {
    return r.function_name == function_name;
  });
  return it == rules_.end() ? nullptr : &*it;
}

void SecurityRuleset::add(SecurityRule rule) {
  for (auto& existing : rules_) {
    if (existing.function_name == rule.function_name) {
      existing = std::move(rule);
      return;
    }
  }
  rules_.push_back(std::move(rule));
}

bool SecurityRuleset::remove(std::string_view function_name) {
  return std::erase_if(rules_, [&](const SecurityRule& r) {
           return r.function_name == function_name;
         }) > 0;
}

std::vector<SecurityFinding> scan_file(std::span<const Token> tokens,
                                       const SecurityRuleset& ruleset, std::string_view file) {
  std::vector<SecurityFinding> findings;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Identifier) continue;
    const SecurityRule* rule = ruleset.find(tokens[i].text);
    if (rule == nullptr) continue;
    std::size_t j = i + 1;
    while (j < tokens.size() &&
           (tokens[j].kind == TokenKind::Whitespace || tokens[j].kind == TokenKind::Comment)) {
      ++j;
    }
    if (j < tokens.size() && tokens[j].is(TokenKind::Punctuation, "(")) {
      findings.push_back(SecurityFinding{*rule, std::string(file), tokens[i].line});
    }
  }
  return findings;
}

SecurityDensities security_densities(std::span<const SecurityFinding> findings,
                                     std::size_t repo_sloc) {
  if (repo_sloc < 1) throw DomainError("security_densities: repo_sloc must be >= 1");
  std::size_t low = 0;
  std::size_t medium = 0;
  std::size_t high = 0;
  for (const auto& f : findings) {
    switch (f.rule.severity) {
      case Severity::Low: ++low; break;
      case Severity::Medium: ++medium; break;
      case Severity::High: ++high; break;
    }
  }
  const auto sloc = static_cast<double>(repo_sloc);
  return {static_cast<double>(low) / sloc, static_cast<double>(medium) / sloc,
          static_cast<double>(high) / sloc};
}

}  // namespace gitrank
