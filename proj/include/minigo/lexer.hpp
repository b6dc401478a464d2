#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "minigo/ast.hpp"

namespace minigo {

enum class Tok {
  Eof,
  Ident,
  Int,
  Float,
  String,
  Char,
  Keyword,
  Op,
  Semi, // explicit ';' or inserted at a newline
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  SourceLoc loc;
  bool implicit = false; // automatically inserted semicolon

  bool is(Tok k, std::string_view t) const { return kind == k && text == t; }
  bool is_op(std::string_view t) const { return kind == Tok::Op && text == t; }
  bool is_kw(std::string_view t) const {
    return kind == Tok::Keyword && text == t;
  }
};

/// Tokenizes Go surface syntax, applying Go's semicolon insertion rule.
/// Throws ParseError on malformed literals or stray characters.
std::vector<Token> tokenize(std::string_view source, const std::string &file);

} // namespace minigo
