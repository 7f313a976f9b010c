#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gitrank {

enum class TokenKind {
  Identifier,
  Keyword,
  Operator,
  Punctuation,
  NumberLiteral,
  StringLiteral,
  CharLiteral,
  Comment,
  Whitespace,
  Preprocessor,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind{TokenKind::Punctuation};
  std::string text;
  std::size_t line{1};  ///< 1-based line of the first byte

  /// Number of newline bytes inside the lexeme.
  [[nodiscard]] std::size_t newline_count() const;
  /// Last physical line the lexeme touches.
  [[nodiscard]] std::size_t end_line() const { return line + newline_count(); }
  [[nodiscard]] bool significant() const {
    return kind != TokenKind::Whitespace && kind != TokenKind::Comment &&
           kind != TokenKind::Preprocessor;
  }
  [[nodiscard]] bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }

  bool operator==(const Token&) const = default;
};

/// True for the fixed C11 + C++17 keyword table.
bool is_keyword(std::string_view word);

/// Lossless tokenization of C/C++ text. Never fails: bytes the lexer does not
/// recognize come back as one-byte Punctuation tokens, and concatenating every
/// token's text reproduces the input exactly.
std::vector<Token> tokenize(std::string_view text);

/// A brace-delimited function definition found by extract_functions.
///
/// `body` views the token vector passed to extract_functions and is only valid
/// while that vector is alive and unmodified.
struct FunctionSpan {
  std::string name;  ///< explicit qualification kept, e.g. "ns::Widget::draw"
  std::size_t start_line{0};  ///< line of the name token
  std::size_t end_line{0};    ///< line of the closing brace
  std::span<const Token> body;  ///< tokens strictly between `{` and the matching `}`
};

/// Heuristic function recognizer.
///
/// A definition is `name ( ... ) [qualifiers | -> trailing-type | : init-list] {`
/// at any nesting level that is not already inside a function body. `name` is
/// an identifier (optionally `A::B::` qualified, `~` for destructors) or an
/// `operator` form. Keywords never name functions, so `if (x) {` or
/// `while (x) {` are not definitions. Declarations (`;`), deleted/defaulted
/// functions (`=`), and bodies that never close produce no span. Lambdas and
/// local classes stay inside the enclosing span.
std::vector<FunctionSpan> extract_functions(std::span<const Token> tokens);

}  // namespace gitrank
