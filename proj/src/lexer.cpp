#include "gitrank/lexer.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <unordered_set>

namespace gitrank {

namespace {

constexpr std::array<std::string_view, 5> kThreeCharOps = {"<<=", ">>=", "<=>", "->*", "..."};
constexpr std::array<std::string_view, 22> kTwoCharOps = {
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", ".*", "##"};
constexpr std::string_view kOneCharOps = "+-*/%=<>!&|^~?:.";

const std::unordered_set<std::string_view>& keyword_table() {
  static const std::unordered_set<std::string_view> table = {
      // C++17
      "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool", "break",
      "case", "catch", "char", "char16_t", "char32_t", "class", "compl", "const", "constexpr",
      "const_cast", "continue", "decltype", "default", "delete", "do", "double", "dynamic_cast",
      "else", "enum", "explicit", "export", "extern", "false", "float", "for", "friend", "goto",
      "if", "inline", "int", "long", "mutable", "namespace", "new", "noexcept", "not", "not_eq",
      "nullptr", "operator", "or", "or_eq", "private", "protected", "public", "register",
      "reinterpret_cast", "return", "short", "signed", "sizeof", "static", "static_assert",
      "static_cast", "struct", "switch", "template", "this", "thread_local", "throw", "true",
      "try", "typedef", "typeid", "typename", "union", "unsigned", "using", "virtual", "void",
      "volatile", "wchar_t", "while", "xor", "xor_eq",
      // C11 only
      "restrict", "_Alignas", "_Alignof", "_Atomic", "_Bool", "_Complex", "_Generic",
      "_Imaginary", "_Noreturn", "_Static_assert", "_Thread_local"};
  return table;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || u >= 0x80;
}
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }
bool is_alnum(char c) { return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t line = 1;
    bool line_start = true;
    while (pos_ < text_.size()) {
      const std::size_t begin = pos_;
      const TokenKind kind = next(line_start);
      Token tok{kind, std::string(text_.substr(begin, pos_ - begin)), line};
      const std::size_t newlines = tok.newline_count();
      line += newlines;
      if (kind == TokenKind::Whitespace) {
        if (newlines > 0) line_start = true;
      } else if (kind != TokenKind::Comment) {
        line_start = false;
      }
      out.push_back(std::move(tok));
    }
    return out;
  }

 private:
  [[nodiscard]] char at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }

  // Backslash-newline (optionally CRLF); returns its length or 0.
  [[nodiscard]] std::size_t continuation_at(std::size_t i) const {
    if (at(i) != '\\') return 0;
    if (at(i + 1) == '\n') return 2;
    if (at(i + 1) == '\r' && at(i + 2) == '\n') return 3;
    return 0;
  }

  TokenKind next(bool line_start) {
    const char c = text_[pos_];
    if (is_space(c) || continuation_at(pos_) > 0) {
      while (pos_ < text_.size()) {
        if (is_space(text_[pos_])) {
          ++pos_;
        } else if (const auto n = continuation_at(pos_); n > 0) {
          pos_ += n;
        } else {
          break;
        }
      }
      return TokenKind::Whitespace;
    }
    if (c == '/' && at(pos_ + 1) == '/') {
      skip_line_comment();
      return TokenKind::Comment;
    }
    if (c == '/' && at(pos_ + 1) == '*') {
      skip_block_comment();
      return TokenKind::Comment;
    }
    if (c == '#' && line_start) {
      skip_directive();
      return TokenKind::Preprocessor;
    }
    if (is_ident_start(c)) return identifier_or_prefixed_literal();
    if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) {
      skip_number();
      return TokenKind::NumberLiteral;
    }
    if (c == '"') {
      skip_quoted('"');
      return TokenKind::StringLiteral;
    }
    if (c == '\'') {
      skip_quoted('\'');
      return TokenKind::CharLiteral;
    }
    return operator_or_punctuation();
  }

  // Stops before the newline; a trailing backslash continues the comment.
  void skip_line_comment() {
    pos_ += 2;
    while (pos_ < text_.size()) {
      if (const auto n = continuation_at(pos_); n > 0) {
        pos_ += n;
      } else if (text_[pos_] == '\n') {
        return;
      } else {
        ++pos_;
      }
    }
  }

  void skip_block_comment() {
    const auto close = text_.find("*/", pos_ + 2);
    pos_ = close == std::string_view::npos ? text_.size() : close + 2;
  }

  void skip_directive() {
    ++pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (const auto n = continuation_at(pos_); n > 0) {
        pos_ += n;
      } else if (c == '\n') {
        break;
      } else if (c == '/' && at(pos_ + 1) == '*') {
        skip_block_comment();
      } else if (c == '/' && at(pos_ + 1) == '/') {
        skip_line_comment();
      } else if (c == '"' || c == '\'') {
        skip_quoted(c);
      } else {
        ++pos_;
      }
    }
    // A trailing \r belongs to the line ending, not the directive.
    if (pos_ > 0 && text_[pos_ - 1] == '\r' && at(pos_) == '\n') --pos_;
  }

  // Escapes are swallowed; an unterminated literal ends before the newline.
  void skip_quoted(char quote) {
    ++pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\\') {
        pos_ = std::min(pos_ + 2, text_.size());
      } else if (c == quote) {
        ++pos_;
        return;
      } else if (c == '\n') {
        if (pos_ > 0 && text_[pos_ - 1] == '\r') --pos_;
        return;
      } else {
        ++pos_;
      }
    }
  }

  void skip_raw_string() {
    // pos_ is on the opening quote of R"delim( ... )delim"
    const std::size_t open = text_.find('(', pos_ + 1);
    if (open == std::string_view::npos || open - pos_ - 1 > 16) {
      skip_quoted('"');
      return;
    }
    const std::string_view delim = text_.substr(pos_ + 1, open - pos_ - 1);
    if (std::any_of(delim.begin(), delim.end(),
                    [](char c) { return is_space(c) || c == '\\' || c == ')' || c == '"'; })) {
      skip_quoted('"');
      return;
    }
    std::string terminator = ")";
    terminator.append(delim);
    terminator.push_back('"');
    const auto close = text_.find(terminator, open + 1);
    pos_ = close == std::string_view::npos ? text_.size() : close + terminator.size();
  }

  TokenKind identifier_or_prefixed_literal() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view word = text_.substr(begin, pos_ - begin);
    const char next = at(pos_);
    if (next == '"' && (word == "R" || word == "LR" || word == "uR" || word == "UR" ||
                        word == "u8R")) {
      skip_raw_string();
      return TokenKind::StringLiteral;
    }
    if (word == "L" || word == "u" || word == "U" || word == "u8") {
      if (next == '"') {
        skip_quoted('"');
        return TokenKind::StringLiteral;
      }
      if (next == '\'') {
        skip_quoted('\'');
        return TokenKind::CharLiteral;
      }
    }
    return is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
  }

  // pp-number: digits, letters, dots, exponent signs and ' digit separators.
  void skip_number() {
    ++pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (is_ident_char(c) || c == '.') {
        ++pos_;
      } else if ((c == '+' || c == '-') &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E' || text_[pos_ - 1] == 'p' ||
                  text_[pos_ - 1] == 'P')) {
        ++pos_;
      } else if (c == '\'' && is_alnum(at(pos_ + 1))) {
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  TokenKind operator_or_punctuation() {
    const std::string_view rest = text_.substr(pos_);
    for (const auto op : kThreeCharOps) {
      if (rest.starts_with(op)) {
        pos_ += 3;
        return TokenKind::Operator;
      }
    }
    for (const auto op : kTwoCharOps) {
      if (rest.starts_with(op)) {
        pos_ += 2;
        return TokenKind::Operator;
      }
    }
    const char c = text_[pos_++];
    return kOneCharOps.find(c) != std::string_view::npos ? TokenKind::Operator
                                                         : TokenKind::Punctuation;
  }

  std::string_view text_;
  std::size_t pos_{0};
};

// ---------------------------------------------------------------------------
// Function recognition over the significant-token subsequence.

class FunctionFinder {
 public:
  explicit FunctionFinder(std::span<const Token> tokens) : tokens_(tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].significant()) sig_.push_back(i);
    }
  }

  std::vector<FunctionSpan> run() {
    std::vector<FunctionSpan> found;
    std::size_t p = 0;
    while (p < sig_.size()) {
      const Token& t = tok(p);
      const bool candidate = (t.kind == TokenKind::Identifier && is(p + 1, "(")) ||
                             t.is(TokenKind::Keyword, "operator");
      if (candidate) {
        if (auto hit = try_function(p)) {
          found.push_back(std::move(hit->span));
          p = hit->resume;
          continue;
        }
      }
      ++p;
    }
    return found;
  }

 private:
  struct Hit {
    FunctionSpan span;
    std::size_t resume;
  };

  [[nodiscard]] const Token& tok(std::size_t p) const { return tokens_[sig_[p]]; }
  [[nodiscard]] bool is(std::size_t p, std::string_view text) const {
    if (p >= sig_.size()) return false;
    const Token& t = tok(p);
    return (t.kind == TokenKind::Operator || t.kind == TokenKind::Punctuation) && t.text == text;
  }
  [[nodiscard]] bool is_word(std::size_t p) const {
    return p < sig_.size() &&
           (tok(p).kind == TokenKind::Identifier || tok(p).kind == TokenKind::Keyword);
  }

  // Index of the bracket closing the one at p (same bracket type only).
  [[nodiscard]] std::optional<std::size_t> match_forward(std::size_t p) const {
    const std::string_view open = tok(p).text;
    const std::string_view close = open == "(" ? ")" : open == "[" ? "]" : "}";
    int depth = 0;
    for (std::size_t q = p; q < sig_.size(); ++q) {
      if (is(q, open)) {
        ++depth;
      } else if (is(q, close)) {
        if (--depth == 0) return q;
      }
    }
    return std::nullopt;
  }

  // Skips a template argument list backwards from its closing `>`.
  [[nodiscard]] std::optional<std::size_t> match_angle_backward(std::size_t p) const {
    int depth = 0;
    for (std::size_t q = p + 1; q-- > 0;) {
      if (is(q, ">")) ++depth;
      else if (is(q, ">>")) depth += 2;
      else if (is(q, "<") && --depth == 0) return q;
      else if (is(q, ";") || is(q, "{") || is(q, "}")) return std::nullopt;
    }
    return std::nullopt;
  }

  struct Declarator {
    std::string name;
    std::size_t name_pos;
    std::size_t paren;
  };

  [[nodiscard]] std::optional<Declarator> read_operator(std::size_t p) const {
    std::string name = "operator";
    std::size_t q = p + 1;
    if (is(q, "(") && is(q + 1, ")") && is(q + 2, "(")) return Declarator{name + "()", p, q + 2};
    for (std::size_t taken = 0; q < sig_.size() && taken < 6; ++q, ++taken) {
      if (is(q, "(")) return taken == 0 ? std::nullopt : std::optional{Declarator{name, p, q}};
      if (is(q, ";") || is(q, "{") || is(q, "}")) return std::nullopt;
      const Token& t = tok(q);
      const bool spaced = t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword;
      if (spaced) name.push_back(' ');
      name += t.text;
    }
    return std::nullopt;
  }

  [[nodiscard]] Declarator read_name(std::size_t p) const {
    std::string name = tok(p).text;
    std::size_t k = p;
    if (k > 0 && is(k - 1, "~")) {
      name.insert(0, "~");
      --k;
    }
    while (k >= 2 && is(k - 1, "::")) {
      std::size_t owner = k - 2;
      if (is(owner, ">") || is(owner, ">>")) {
        const auto open = match_angle_backward(owner);
        if (!open || *open == 0) break;
        owner = *open - 1;
      }
      if (tok(owner).kind != TokenKind::Identifier) break;
      name.insert(0, tok(owner).text + "::");
      k = owner;
    }
    return {std::move(name), p, p + 1};
  }

  // Words that may carry a parenthesised argument after the parameter list.
  static bool is_suffix_call(std::string_view word) {
    return word == "noexcept" || word == "throw" || word == "__attribute__" ||
           word == "alignas" || word == "decltype" || word == "__declspec" ||
           word == "requires";
  }

  [[nodiscard]] std::optional<Hit> try_function(std::size_t p) const {
    std::optional<Declarator> decl;
    if (tok(p).kind == TokenKind::Keyword) {
      decl = read_operator(p);
    } else {
      decl = read_name(p);
    }
    if (!decl) return std::nullopt;
    const auto params_close = match_forward(decl->paren);
    if (!params_close) return std::nullopt;

    constexpr std::size_t kMaxSuffixTokens = 96;
    bool init_list = false;
    for (std::size_t q = *params_close + 1; q < sig_.size(); ++q) {
      if (q - *params_close > kMaxSuffixTokens) return std::nullopt;
      const bool after_word = is_word(q - 1) || is(q - 1, ">") || is(q - 1, ">>");
      if (is(q, "{")) {
        const auto close = match_forward(q);
        if (!close) return std::nullopt;
        if (init_list && after_word) {  // member{value}
          q = *close;
          continue;
        }
        return Hit{make_span(decl->name, decl->name_pos, q, *close), *close + 1};
      }
      if (is(q, "(")) {
        const Token& prev = tok(q - 1);
        const bool allowed = (init_list && after_word) ||
                             (prev.kind != TokenKind::Punctuation && is_suffix_call(prev.text));
        const auto close = match_forward(q);
        if (!allowed || !close) return std::nullopt;
        q = *close;
        continue;
      }
      if (is(q, "[")) {
        const auto close = match_forward(q);
        if (!close) return std::nullopt;
        q = *close;
        continue;
      }
      if (is(q, ":")) {
        if (init_list) return std::nullopt;
        init_list = true;
        continue;
      }
      if (is(q, ",")) {
        if (!init_list) return std::nullopt;
        continue;
      }
      if (is(q, ";") || is(q, "=") || is(q, "}") || is(q, ")") || is(q, "]")) {
        return std::nullopt;
      }
      const Token& t = tok(q);
      if (t.kind == TokenKind::StringLiteral || t.kind == TokenKind::CharLiteral) {
        return std::nullopt;
      }
      if (t.kind == TokenKind::Identifier && is(q + 1, "(") && !init_list &&
          !is_suffix_call(t.text)) {
        return std::nullopt;  // looks like a second call, e.g. `MACRO(x) int g() {`
      }
    }
    return std::nullopt;
  }

  [[nodiscard]] FunctionSpan make_span(std::string name, std::size_t name_pos,
                                       std::size_t open, std::size_t close) const {
    const std::size_t first = sig_[open] + 1;
    const std::size_t last = sig_[close];
    return FunctionSpan{std::move(name), tok(name_pos).line, tok(close).line,
                        tokens_.subspan(first, last - first)};
  }

  std::span<const Token> tokens_;
  std::vector<std::size_t> sig_;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Punctuation: return "Punctuation";
    case TokenKind::NumberLiteral: return "NumberLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::CharLiteral: return "CharLiteral";
    case TokenKind::Comment: return "Comment";
    case TokenKind::Whitespace: return "Whitespace";
    case TokenKind::Preprocessor: return "Preprocessor";
  }
  return "Unknown";
}

std::size_t Token::newline_count() const {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

bool is_keyword(std::string_view word) { return keyword_table().contains(word); }

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::vector<FunctionSpan> extract_functions(std::span<const Token> tokens) {
  return FunctionFinder(tokens).run();
}

}  // namespace gitrank
