#include <doctest.h>

#include <random>

#include "gitrank/lexer.hpp"

using namespace gitrank;

namespace {

std::string concat(const std::vector<Token>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += t.text;
  return s;
}

std::vector<Token> significant(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (t.significant()) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_SUITE("lexer") {

TEST_CASE("simple assignment") {
  const auto toks = tokenize("a=b+c;");
  const std::vector<Token> expected = {
      {TokenKind::Identifier, "a", 1}, {TokenKind::Operator, "=", 1},
      {TokenKind::Identifier, "b", 1}, {TokenKind::Operator, "+", 1},
      {TokenKind::Identifier, "c", 1}, {TokenKind::Punctuation, ";", 1}};
  CHECK(toks == expected);
}

TEST_CASE("empty input") { CHECK(tokenize("").empty()); }

TEST_CASE("lone block comment") {
  const auto toks = tokenize("/*x*/");
  REQUIRE(toks.size() == 1);
  CHECK(toks[0].kind == TokenKind::Comment);
  CHECK(toks[0].text == "/*x*/");
}

TEST_CASE("keywords and literals") {
  const auto toks = significant(tokenize("if (x >= 0x1'0u) return 'c' + L\"s\" + 1.5e-3;"));
  REQUIRE(toks.size() == 13);
  CHECK(toks[0].kind == TokenKind::Keyword);
  CHECK(toks[3].is(TokenKind::Operator, ">="));
  CHECK(toks[4].is(TokenKind::NumberLiteral, "0x1'0u"));
  CHECK(toks[6].kind == TokenKind::Keyword);
  CHECK(toks[7].is(TokenKind::CharLiteral, "'c'"));
  CHECK(toks[9].is(TokenKind::StringLiteral, "L\"s\""));
  CHECK(toks[11].is(TokenKind::NumberLiteral, "1.5e-3"));
}

TEST_CASE("raw strings and preprocessor lines") {
  const auto toks = tokenize("#define A(x) \\\n  (x)\nauto s = R\"d(a)\"b)d\";\n");
  REQUIRE(!toks.empty());
  CHECK(toks[0].kind == TokenKind::Preprocessor);
  CHECK(toks[0].text == "#define A(x) \\\n  (x)");
  bool found = false;
  for (const auto& t : toks) {
    if (t.kind == TokenKind::StringLiteral) {
      CHECK(t.text == "R\"d(a)\"b)d\"");
      CHECK(t.line == 3);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("maximal munch operators") {
  const auto toks = significant(tokenize("a<<=b->*c...d::e"));
  CHECK(toks[1].is(TokenKind::Operator, "<<="));
  CHECK(toks[3].is(TokenKind::Operator, "->*"));
  CHECK(toks[5].is(TokenKind::Operator, "..."));
  CHECK(toks[7].is(TokenKind::Operator, "::"));
}

TEST_CASE("line numbers advance across tokens") {
  const auto toks = significant(tokenize("a\n/* x\ny */ b\n\nc"));
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].line == 1);
  CHECK(toks[1].line == 3);
  CHECK(toks[2].line == 5);
}

TEST_CASE("round trip on random bytes") {
  std::mt19937 rng(1234);
  const std::string alphabet = "ab_1 \t\n\r\\\"'/*#{}()<>=+-&|?:;.,R8uLx\x80\xff";
  for (int iter = 0; iter < 2000; ++iter) {
    std::string s(rng() % 64, ' ');
    for (auto& c : s) c = alphabet[rng() % alphabet.size()];
    CHECK(concat(tokenize(s)) == s);
  }
  for (int iter = 0; iter < 500; ++iter) {
    std::string s(rng() % 128, ' ');
    for (auto& c : s) c = static_cast<char>(rng() % 256);
    CHECK(concat(tokenize(s)) == s);
  }
}

TEST_CASE("function spans") {
  SUBCASE("single") {
    const auto toks = tokenize("int f(){return 0;}");
    const auto fns = extract_functions(toks);
    REQUIRE(fns.size() == 1);
    CHECK(fns[0].name == "f");
    CHECK(fns[0].start_line == 1);
    CHECK(fns[0].end_line == 1);
  }
  SUBCASE("declaration only") { CHECK(extract_functions(tokenize("int f(int);")).empty()); }
  SUBCASE("two functions") {
    const auto fns = extract_functions(tokenize("int f(){} int g(){}"));
    REQUIRE(fns.size() == 2);
    CHECK(fns[0].name == "f");
    CHECK(fns[1].name == "g");
  }
  SUBCASE("control statements are not functions") {
    const auto fns = extract_functions(tokenize("void f(){ if (a) { b(); } while (c) {} }"));
    REQUIRE(fns.size() == 1);
    CHECK(fns[0].name == "f");
  }
  SUBCASE("class members and qualified names") {
    const auto fns = extract_functions(tokenize(
        "struct S { S() : a(1), b{2} {} ~S() {} };\n"
        "int ns::S::get() const noexcept(true) { return a; }\n"
        "template <class T> void X<T>::run() {}\n"));
    REQUIRE(fns.size() == 4);
    CHECK(fns[0].name == "S");
    CHECK(fns[1].name == "~S");
    CHECK(fns[2].name == "ns::S::get");
    CHECK(fns[2].start_line == 2);
    CHECK(fns[3].name == "X::run");
  }
  SUBCASE("macro invocations and initializers are ignored") {
    CHECK(extract_functions(tokenize("int x = f(1); S s{g(2)}; FOO(bar);")).empty());
  }
}

TEST_CASE("function bodies are brace balanced") {
  const auto toks = tokenize(
      "void a() { auto l = [](){ return 1; }; { { } } }\n"
      "int b(int x) { switch (x) { case 1: { return 2; } } return 0; }\n");
  const auto fns = extract_functions(toks);
  REQUIRE(fns.size() == 2);
  for (const auto& fn : fns) {
    int depth = 0;
    for (const auto& t : fn.body) {
      if (t.is(TokenKind::Punctuation, "{")) ++depth;
      if (t.is(TokenKind::Punctuation, "}")) --depth;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
  }
}

}  // TEST_SUITE
