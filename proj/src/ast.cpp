#include "minigo/ast.hpp"

#include <cctype>
#include <cstring>

namespace minigo {

const std::string &SourceLoc::file_name() const {
  static const std::string unknown = "<unknown>";
  return file ? *file : unknown;
}

std::string SourceLoc::str() const {
  return file_name() + ":" + std::to_string(line) + ":" + std::to_string(column);
}

bool SourceLoc::operator==(const SourceLoc &other) const {
  return file_name() == other.file_name() && line == other.line &&
         column == other.column;
}

Expr Expr::int_lit(std::int64_t n, SourceLoc loc) {
  Expr e;
  e.kind = Kind::IntLit;
  e.int_value = n;
  e.text = std::to_string(n);
  e.loc = std::move(loc);
  return e;
}

Expr Expr::bool_lit(bool b, SourceLoc loc) {
  Expr e;
  e.kind = Kind::BoolLit;
  e.bool_value = b;
  e.text = b ? "true" : "false";
  e.loc = std::move(loc);
  return e;
}

Expr Expr::var(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Var;
  e.idents = {name};
  e.text = std::move(name);
  e.loc = std::move(loc);
  return e;
}

Expr Expr::opaque(std::string normalized, std::vector<std::string> idents,
                  SourceLoc loc) {
  Expr e;
  e.kind = Kind::Opaque;
  e.text = std::move(normalized);
  e.idents = std::move(idents);
  e.loc = std::move(loc);
  return e;
}

bool Expr::operator==(const Expr &other) const {
  if (kind != other.kind)
    return false;
  switch (kind) {
  case Kind::IntLit:
    return int_value == other.int_value;
  case Kind::BoolLit:
    return bool_value == other.bool_value;
  default:
    return text == other.text;
  }
}

namespace {

bool word_like(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '"' ||
         c == '\'' || c == '`' || static_cast<unsigned char>(c) >= 0x80;
}

bool op_char(char c) { return c != '\0' && std::strchr("+-*/%&|^<>=!:.", c); }

} // namespace

std::string normalize_expr_text(const std::vector<std::string> &tokens) {
  std::string out;
  for (const std::string &tok : tokens) {
    if (tok.empty())
      continue;
    if (!out.empty()) {
      char prev = out.back();
      char next = tok.front();
      // A space only where gluing would change the token sequence.
      if ((word_like(prev) && word_like(next)) || (op_char(prev) && op_char(next)))
        out += ' ';
    }
    out += tok;
  }
  return out;
}

std::vector<std::string> FuncDecl::chan_params() const {
  std::vector<std::string> out;
  for (const Param &p : params)
    if (p.is_chan)
      out.push_back(p.name);
  for (const std::string &c : captured)
    out.push_back(c);
  return out;
}

const FuncDecl *Program::find(const std::string &name) const {
  for (const auto &d : decls)
    if (d->name == name)
      return d.get();
  return nullptr;
}

std::vector<const FuncDecl *> Program::top_level() const {
  std::vector<const FuncDecl *> out;
  for (const auto &d : decls)
    if (!d->is_literal())
      out.push_back(d.get());
  return out;
}

void for_each_stmt(const StmtList &body,
                   const std::function<void(const Stmt &)> &fn) {
  for (const Stmt &s : body) {
    fn(s);
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Select>) {
            for (const CommClause &c : n.cases)
              for_each_stmt(c.body, fn);
            if (n.default_body)
              for_each_stmt(*n.default_body, fn);
          } else if constexpr (std::is_same_v<T, Block>) {
            for_each_stmt(n.body, fn);
          } else if constexpr (std::is_same_v<T, If>) {
            if (n.init)
              for_each_stmt({*n.init}, fn);
            for_each_stmt(n.then_body, fn);
            for_each_stmt(n.else_body, fn);
          } else if constexpr (std::is_same_v<T, For> ||
                               std::is_same_v<T, ForRange>) {
            for_each_stmt(n.body, fn);
          } else if constexpr (std::is_same_v<T, Switch>) {
            if (n.init)
              for_each_stmt({*n.init}, fn);
            for (const StmtList &b : n.branches)
              for_each_stmt(b, fn);
          }
        },
        s.node);
  }
}

} // namespace minigo
