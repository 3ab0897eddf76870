#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nullnrc/ast.hpp"
#include "nullnrc/result.hpp"

namespace nrc {

struct SourcePos {
  int line = 1;  // 1-based
  int column = 1;
};

struct SourceSpan {
  SourcePos start;
  SourcePos end;
  std::optional<std::string> file;
};

struct ParseError {
  SourceSpan span;
  std::string message;   // never empty
  std::string expected;  // description of the acceptable token set
};

std::string format_parse_error(const ParseError& e);

// ---------------------------------------------------------------------------
// Lexer (shared with the handler parser)
// ---------------------------------------------------------------------------

enum class TokKind {
  Int,
  Float,
  String,
  Ident,    // includes keywords; see Token::is_keyword
  Symbol,   // punctuation / operators, text in Token::text
  End,
};

struct Token {
  TokKind kind;
  std::string text;            // identifier name, symbol text
  std::int64_t int_val = 0;    // Int
  double float_val = 0;        // Float
  std::string string_val;      // String (unescaped)
  SourceSpan span;
};

// Tokenizes the whole input ('#' starts a line comment).
Result<std::vector<Token>, ParseError> lex(std::string_view src);

bool is_reserved_word(std::string_view word);

// ---------------------------------------------------------------------------
// Parser / printer
// ---------------------------------------------------------------------------

Result<TermPtr, ParseError> parse_term(std::string_view src);

// Minimal-parentheses rendering; parse_term(pretty(m)) is alpha-equal to m.
std::string pretty(const TermPtr& t);

std::string pretty_ty(const TyPtr& t);
std::string pretty_value(const Value& v);
std::string pretty_constant(const Constant& c);

}  // namespace nrc
