#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitrank/lexer.hpp"

namespace gitrank {

enum class Severity { Low, Medium, High };

std::string_view to_string(Severity s);

struct SecurityRule {
  std::string function_name;
  Severity severity{Severity::Low};
  std::string rationale;
};

/// Call-site rules keyed by function name (names are unique).
class SecurityRuleset {
 public:
  /// Bundled table of dangerous C library calls in three severity buckets.
  static SecurityRuleset defaults();

  [[nodiscard]] const std::vector<SecurityRule>& rules() const { return rules_; }
  [[nodiscard]] const SecurityRule* find(std::string_view function_name) const;

  /// Adds the rule or moves an existing name to the new severity.
  void add(SecurityRule rule);
  /// Returns false when the name was not present.
  bool remove(std::string_view function_name);

 private:
  std::vector<SecurityRule> rules_;
};

struct SecurityFinding {
  SecurityRule rule;
  std::string file;
  std::size_t line{0};
};

/// One finding per Identifier token naming a rule function whose next
/// significant token is `(`.
std::vector<SecurityFinding> scan_file(std::span<const Token> tokens,
                                       const SecurityRuleset& ruleset,
                                       std::string_view file = {});

struct SecurityDensities {
  double low{0.0};
  double medium{0.0};
  double high{0.0};
};

/// Per-severity finding count divided by repo_sloc. Throws DomainError when
/// repo_sloc < 1.
SecurityDensities security_densities(std::span<const SecurityFinding> findings,
                                     std::size_t repo_sloc);

}  // namespace gitrank
