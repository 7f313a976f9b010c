#include "gitrank/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

#include "gitrank/errors.hpp"

namespace gitrank {

namespace {

bool is_decision_point(const Token& tok) {
  if (tok.kind == TokenKind::Keyword) {
    return tok.text == "if" || tok.text == "for" || tok.text == "while" || tok.text == "case" ||
           tok.text == "catch";
  }
  if (tok.kind == TokenKind::Operator) {
    return tok.text == "&&" || tok.text == "||" || tok.text == "?";
  }
  return false;
}

bool is_operand(TokenKind kind) {
  return kind == TokenKind::Identifier || kind == TokenKind::NumberLiteral ||
         kind == TokenKind::StringLiteral || kind == TokenKind::CharLiteral;
}

bool is_operator(TokenKind kind) {
  return kind == TokenKind::Keyword || kind == TokenKind::Operator ||
         kind == TokenKind::Punctuation;
}

}  // namespace

int cyclomatic_complexity(std::span<const Token> body) {
  return 1 + static_cast<int>(std::count_if(body.begin(), body.end(), is_decision_point));
}

double halstead_volume_from_counts(std::size_t n1, std::size_t n2, std::size_t N1,
                                   std::size_t N2) {
  const std::size_t vocabulary = n1 + n2;
  if (vocabulary < 2) return 0.0;
  return static_cast<double>(N1 + N2) * std::log2(static_cast<double>(vocabulary));
}

HalsteadCounts halstead_volume(std::span<const Token> tokens) {
  std::unordered_set<std::string_view> operators;
  std::unordered_set<std::string_view> operands;
  HalsteadCounts counts;
  for (const Token& tok : tokens) {
    if (is_operand(tok.kind)) {
      ++counts.total_operands;
      operands.insert(tok.text);
    } else if (is_operator(tok.kind)) {
      ++counts.total_operators;
      operators.insert(tok.text);
    }
  }
  counts.distinct_operators = operators.size();
  counts.distinct_operands = operands.size();
  counts.volume = halstead_volume_from_counts(counts.distinct_operators, counts.distinct_operands,
                                              counts.total_operators, counts.total_operands);
  return counts;
}

double maintainability_index(double volume, double cc, double sloc) {
  if (!(cc >= 1.0)) throw DomainError("maintainability_index: cc must be >= 1");
  if (!(sloc >= 1.0)) throw DomainError("maintainability_index: sloc must be >= 1");
  if (!(volume >= 0.0) || !std::isfinite(volume)) {
    throw DomainError("maintainability_index: volume must be finite and >= 0");
  }
  const double raw = 171.0 - 5.2 * std::log(std::max(volume, 1.0)) - 0.23 * cc -
                     16.2 * std::log(std::max(sloc, 1.0));
  return std::clamp(raw * 100.0 / 171.0, 0.0, 100.0);
}

FileCodeMetrics analyze_source(std::string_view text) {
  return analyze_source(text, tokenize(text));
}

FileCodeMetrics analyze_source(std::string_view text, std::span<const Token> tokens) {
  FileCodeMetrics file;
  const auto kinds = classify_lines(text, tokens);
  for (const LineKind k : kinds) {
    ++file.lines.total;
    if (k == LineKind::Source) ++file.lines.source;
    else if (k == LineKind::CommentOnly) ++file.lines.comment_only;
    else ++file.lines.blank;
  }

  for (const FunctionSpan& span : extract_functions(tokens)) {
    FunctionMetrics fn;
    fn.name = span.name;
    fn.start_line = span.start_line;
    fn.end_line = span.end_line;
    fn.cc = cyclomatic_complexity(span.body);
    fn.halstead = halstead_volume(span.body);
    const auto first = std::min(span.start_line - 1, kinds.size());
    const auto last = std::min(span.end_line, kinds.size());
    fn.sloc = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::count(kinds.begin() + static_cast<std::ptrdiff_t>(first),
                                               kinds.begin() + static_cast<std::ptrdiff_t>(last),
                                               LineKind::Source)));
    fn.mi = maintainability_index(fn.halstead.volume, fn.cc, static_cast<double>(fn.sloc));
    file.functions.push_back(std::move(fn));
  }
  return file;
}

std::optional<double> file_maintainability_index(const FileCodeMetrics& file) {
  if (file.functions.empty() || file.lines.source == 0) return std::nullopt;
  double volume = 0.0;
  double cc_sum = 0.0;
  for (const auto& fn : file.functions) {
    volume += fn.halstead.volume;
    cc_sum += fn.cc;
  }
  return maintainability_index(volume, cc_sum / static_cast<double>(file.functions.size()),
                               static_cast<double>(file.lines.source));
}

RepoCodeMetrics repo_code_metrics(std::span<const FileCodeMetrics> files) {
  RepoCodeMetrics repo;
  double cc_sum = 0.0;
  double mi_sum = 0.0;
  for (const auto& file : files) {
    for (const auto& fn : file.functions) cc_sum += fn.cc;
    repo.function_count += file.functions.size();
    if (const auto mi = file_maintainability_index(file)) {
      mi_sum += *mi;
      ++repo.file_count;
    }
  }
  if (repo.function_count == 0 || repo.file_count == 0) {
    throw NoAnalyzableCode("no analyzable functions");
  }
  repo.avg_cc = cc_sum / static_cast<double>(repo.function_count);
  repo.avg_mi = mi_sum / static_cast<double>(repo.file_count);
  return repo;
}

}  // namespace gitrank
