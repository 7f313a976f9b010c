#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <optional>
#include <string_view>
#include <vector>

#include "gitrank/lexer.hpp"
#include "gitrank/source.hpp"

namespace gitrank {

/// Halstead counts. Operands are identifiers and literals; operators are
/// keywords, operators and punctuation. Comments, whitespace and preprocessor
/// directives are ignored.
struct HalsteadCounts {
  std::size_t distinct_operators{0};  // n1
  std::size_t distinct_operands{0};   // n2
  std::size_t total_operators{0};     // N1
  std::size_t total_operands{0};      // N2
  double volume{0.0};                 // (N1 + N2) * log2(n1 + n2), 0 when n1 + n2 < 2

  bool operator==(const HalsteadCounts&) const = default;
};

/// 1 + the number of `if`, `for`, `while`, `case`, `catch`, `&&`, `||` and `?`
/// tokens in `body`.
int cyclomatic_complexity(std::span<const Token> body);

HalsteadCounts halstead_volume(std::span<const Token> tokens);

/// Volume with the (N1 + N2) * log2(n1 + n2) rule and the n1 + n2 < 2 floor.
double halstead_volume_from_counts(std::size_t n1, std::size_t n2, std::size_t N1,
                                   std::size_t N2);

/// Modified maintainability index rescaled to [0, 100]:
///
///   raw = 171 - 5.2 ln(max(V, 1)) - 0.23 cc - 16.2 ln(max(sloc, 1))
///   mi  = clamp(raw * 100 / 171, 0, 100)
///
/// Throws DomainError when cc < 1, sloc < 1, or volume is negative / not finite.
double maintainability_index(double volume, double cc, double sloc);

struct FunctionMetrics {
  std::string name;
  std::size_t start_line{0};
  std::size_t end_line{0};
  int cc{1};
  std::size_t sloc{1};
  HalsteadCounts halstead;
  double mi{0.0};
};

struct FileCodeMetrics {
  std::vector<FunctionMetrics> functions;
  LineCounts lines;
};

/// Lexes one file and measures every recognised function. Function sloc is the
/// number of source lines between the name line and the closing brace.
FileCodeMetrics analyze_source(std::string_view text);
FileCodeMetrics analyze_source(std::string_view text, std::span<const Token> tokens);

struct RepoCodeMetrics {
  double avg_cc{0.0};
  double avg_mi{0.0};
  std::size_t function_count{0};
  std::size_t file_count{0};  ///< files contributing to avg_mi
};

/// Per-file MI of a module: summed function volume, mean function cc, file sloc.
/// Returns nullopt for files with no functions or no source lines.
std::optional<double> file_maintainability_index(const FileCodeMetrics& file);

/// avg_cc is the unweighted mean over every function of every file; avg_mi is
/// the unweighted mean of file_maintainability_index over files that have one.
/// Throws NoAnalyzableCode when no function was found.
RepoCodeMetrics repo_code_metrics(std::span<const FileCodeMetrics> files);

}  // namespace gitrank
