#include "minigo/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>

#include "minigo/errors.hpp"

namespace minigo {

namespace {

constexpr std::array<std::string_view, 25> kKeywords = {
    "break",  "case",   "chan",     "const",       "continue",
    "default", "defer", "else",     "fallthrough", "for",
    "func",   "go",     "goto",     "if",          "import",
    "interface", "map", "package",  "range",       "return",
    "select", "struct", "switch",   "type",        "var"};

// Longest operators first so that greedy matching works.
constexpr std::array<std::string_view, 47> kOperators = {
    "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--", "==", "!=",
    "<=",  ">=",  ":=",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<",  ">>",  "&^",  "+",   "-",  "*",  "/",  "%",  "&",  "|",  "^",
    "<",   ">",   "=",   "!",   "(",  ")",  "[",  "]",  "{",  "}",  ",",
    ".",   ":",   "~"};

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// As in Go, a semicolon is inserted after a line's final token if it is one
// of these.
bool ends_statement(const Token &t) {
  switch (t.kind) {
  case Tok::Ident:
  case Tok::Int:
  case Tok::Float:
  case Tok::String:
  case Tok::Char:
    return true;
  case Tok::Keyword:
    return t.text == "break" || t.text == "continue" ||
           t.text == "fallthrough" || t.text == "return";
  case Tok::Op:
    return t.text == "++" || t.text == "--" || t.text == ")" ||
           t.text == "]" || t.text == "}";
  default:
    return false;
  }
}

class Lexer {
public:
  Lexer(std::string_view src, const std::string &file)
      : src_(src), file_(std::make_shared<const std::string>(file)) {}

  std::vector<Token> run() {
    while (true) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) {
        maybe_insert_semi();
        push(Tok::Eof, "", here());
        break;
      }
      lex_one();
    }
    return std::move(tokens_);
  }

private:
  SourceLoc here() const { return SourceLoc{file_, line_, col_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void push(Tok kind, std::string text, SourceLoc loc, bool implicit = false) {
    tokens_.push_back(Token{kind, std::move(text), std::move(loc), implicit});
  }

  void maybe_insert_semi() {
    if (!tokens_.empty() && ends_statement(tokens_.back()))
      push(Tok::Semi, ";", here(), true);
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == '\n') {
        maybe_insert_semi();
        advance();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n')
          advance();
      } else if (c == '/' && peek(1) == '*') {
        SourceLoc start = here();
        bool newline = false;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) {
          newline |= peek() == '\n';
          advance();
        }
        if (pos_ >= src_.size())
          throw ParseError(start, "unterminated block comment");
        advance();
        advance();
        if (newline)
          maybe_insert_semi();
      } else {
        break;
      }
    }
  }

  void lex_one() {
    SourceLoc loc = here();
    char c = peek();
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(peek()))
        advance();
      std::string word(src_.substr(start, pos_ - start));
      Tok kind = is_keyword(word) ? Tok::Keyword : Tok::Ident;
      push(kind, std::move(word), loc);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(loc);
      return;
    }
    if (c == '"') {
      lex_quoted('"', Tok::String, loc);
      return;
    }
    if (c == '\'') {
      lex_quoted('\'', Tok::Char, loc);
      return;
    }
    if (c == '`') {
      std::size_t start = pos_;
      advance();
      while (pos_ < src_.size() && peek() != '`')
        advance();
      if (pos_ >= src_.size())
        throw ParseError(loc, "unterminated raw string literal");
      advance();
      push(Tok::String, std::string(src_.substr(start, pos_ - start)), loc);
      return;
    }
    if (c == ';') {
      advance();
      push(Tok::Semi, ";", loc);
      return;
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i)
          advance();
        push(Tok::Op, std::string(op), loc);
        return;
      }
    }
    throw ParseError(loc, std::string("unexpected character '") + c + "'");
  }

  void lex_number(const SourceLoc &loc) {
    std::size_t start = pos_;
    bool is_float = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'b' ||
                          peek(1) == 'B' || peek(1) == 'o' || peek(1) == 'O')) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_')
        advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')
        advance();
      if (peek() == '.') {
        is_float = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek())))
          advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-')
          advance();
        while (std::isdigit(static_cast<unsigned char>(peek())))
          advance();
      }
    }
    push(is_float ? Tok::Float : Tok::Int,
         std::string(src_.substr(start, pos_ - start)), loc);
  }

  void lex_quoted(char quote, Tok kind, const SourceLoc &loc) {
    std::size_t start = pos_;
    advance();
    while (pos_ < src_.size() && peek() != quote) {
      if (peek() == '\n')
        throw ParseError(loc, "newline in literal");
      if (peek() == '\\')
        advance();
      if (pos_ < src_.size())
        advance();
    }
    if (pos_ >= src_.size())
      throw ParseError(loc, "unterminated literal");
    advance();
    push(kind, std::string(src_.substr(start, pos_ - start)), loc);
  }

  std::string_view src_;
  std::shared_ptr<const std::string> file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> tokens_;
};

} // namespace

std::vector<Token> tokenize(std::string_view source, const std::string &file) {
  return Lexer(source, file).run();
}

} // namespace minigo
