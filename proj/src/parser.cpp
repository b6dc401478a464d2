#include "minigo/parser.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "minigo/errors.hpp"
#include "minigo/lexer.hpp"

namespace minigo {

namespace {

// Parse tree for expressions. Only the shapes the statement grammar needs to
// look into are kept; everything else is a token range.
struct PExpr {
  enum class Kind { Ident, Int, Call, Binary, Unary, Other, Type };
  Kind kind = Kind::Other;
  std::size_t begin = 0;
  std::size_t end = 0;
  SourceLoc loc;
  std::string name; // identifier, operator, or callee text
  std::vector<PExpr> children;
  std::vector<PExpr> args;
  std::shared_ptr<FuncDecl> literal;
  bool chan_type = false;
  bool has_recv = false;
  bool has_literal = false;
  bool has_make = false;
};

int binary_precedence(const Token &t) {
  if (t.kind != Tok::Op)
    return 0;
  const std::string &op = t.text;
  if (op == "||")
    return 1;
  if (op == "&&")
    return 2;
  if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
      op == ">=")
    return 3;
  if (op == "+" || op == "-" || op == "|" || op == "^")
    return 4;
  if (op == "*" || op == "/" || op == "%" || op == "<<" || op == ">>" ||
      op == "&" || op == "&^")
    return 5;
  return 0;
}

bool is_assign_op(const Token &t) {
  static const std::set<std::string> ops = {"+=", "-=", "*=", "/=", "%=",
                                            "&=", "|=", "^=", "<<=", ">>=",
                                            "&^="};
  return t.kind == Tok::Op && ops.count(t.text) > 0;
}

std::optional<std::int64_t> parse_int_text(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
  bool negative = false;
  if (!text.empty() && text[0] == '-') {
    negative = true;
    text.erase(0, 1);
  }
  if (text.empty())
    return std::nullopt;
  int base = 10;
  std::size_t skip = 0;
  if (text.size() > 1 && text[0] == '0') {
    char p = text[1];
    if (p == 'x' || p == 'X') {
      base = 16;
      skip = 2;
    } else if (p == 'b' || p == 'B') {
      base = 2;
      skip = 2;
    } else if (p == 'o' || p == 'O') {
      base = 8;
      skip = 2;
    } else {
      base = 8;
      skip = 1;
    }
  }
  std::string digits = text.substr(skip);
  if (digits.empty())
    digits = "0";
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(digits, &used, base);
    if (used != digits.size())
      return std::nullopt;
    return negative ? -v : v;
  } catch (const std::exception &) {
    return std::nullopt;
  }
}

class Parser {
public:
  Parser(std::vector<Token> tokens, std::string file)
      : toks_(std::move(tokens)) {
    program_.file = std::move(file);
  }

  Program run() {
    skip_semis();
    if (cur().is_kw("package")) {
      next();
      expect_kind(Tok::Ident, "package name");
      end_decl();
    }
    while (cur().is_kw("import")) {
      next();
      if (accept_op("(")) {
        while (!cur().is_op(")")) {
          if (cur().kind == Tok::Ident || cur().is_op("."))
            next();
          expect_kind(Tok::String, "import path");
          end_decl_in_group();
        }
        expect_op(")");
      } else {
        if (cur().kind == Tok::Ident || cur().is_op("."))
          next();
        expect_kind(Tok::String, "import path");
      }
      end_decl();
    }
    while (cur().kind != Tok::Eof) {
      if (cur().is_kw("func")) {
        parse_func_decl();
      } else if (cur().is_kw("const")) {
        SourceLoc loc = cur().loc;
        next();
        for (auto &c : parse_const_spec())
          program_.consts.push_back(std::move(c));
      } else if (cur().is_kw("var") || cur().is_kw("type")) {
        unsupported(cur().loc, "top-level '" + cur().text + "' declaration");
      } else {
        fail("expected top-level function or constant declaration");
      }
      end_decl();
    }
    substitute_constants();
    for (auto &d : decls_)
      program_.decls.push_back(d);
    return std::move(program_);
  }

private:
  // --- token helpers -------------------------------------------------------

  const Token &cur() const { return toks_[pos_]; }
  const Token &peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  void next() {
    if (pos_ + 1 < toks_.size())
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &message) const {
    std::string found = cur().kind == Tok::Eof    ? "end of file"
                        : cur().kind == Tok::Semi ? (cur().implicit ? "newline" : "';'")
                                                  : "'" + cur().text + "'";
    throw ParseError(cur().loc, message + ", found " + found);
  }

  [[noreturn]] void unsupported(const SourceLoc &loc,
                                const std::string &what) const {
    throw ParseError(loc, what + " is not supported in MiniGo");
  }

  bool accept_op(std::string_view op) {
    if (cur().is_op(op)) {
      next();
      return true;
    }
    return false;
  }

  void expect_op(std::string_view op) {
    if (!accept_op(op))
      fail("expected '" + std::string(op) + "'");
  }

  Token expect_kind(Tok kind, const std::string &what) {
    if (cur().kind != kind)
      fail("expected " + what);
    Token t = cur();
    next();
    return t;
  }

  std::string expect_ident(const std::string &what = "identifier") {
    return expect_kind(Tok::Ident, what).text;
  }

  void skip_semis() {
    while (cur().kind == Tok::Semi)
      next();
  }

  void end_decl() {
    if (cur().kind == Tok::Eof)
      return;
    if (cur().kind != Tok::Semi)
      fail("expected ';' or newline after declaration");
    skip_semis();
  }

  void end_decl_in_group() {
    if (cur().is_op(")"))
      return;
    if (cur().kind != Tok::Semi)
      fail("expected ';' or newline");
    skip_semis();
  }

  std::string text_of(std::size_t begin, std::size_t end) const {
    std::vector<std::string> parts;
    for (std::size_t i = begin; i < end; ++i)
      if (toks_[i].kind != Tok::Semi)
        parts.push_back(toks_[i].text);
    return normalize_expr_text(parts);
  }

  std::vector<std::string> idents_of(std::size_t begin, std::size_t end) const {
    std::vector<std::string> out;
    for (std::size_t i = begin; i < end; ++i) {
      if (toks_[i].kind != Tok::Ident)
        continue;
      if (i > 0 && toks_[i - 1].is_op("."))
        continue;
      out.push_back(toks_[i].text);
    }
    return out;
  }

  // --- scopes --------------------------------------------------------------

  struct FuncFrame {
    std::size_t scope_base;
    std::vector<std::string> captured;
  };

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }
  void declare_chan(const std::string &name) {
    if (name != "_")
      scopes_.back().insert(name);
  }
  void declare_value(const std::string &name) {
    // A value declaration shadows a channel of the same name.
    if (name != "_")
      scopes_.back().erase(name);
  }

  int chan_scope_of(const std::string &name) const {
    for (int i = static_cast<int>(scopes_.size()) - 1; i >= 0; --i)
      if (scopes_[i].count(name))
        return i;
    return -1;
  }

  bool is_chan(const std::string &name) const {
    return chan_scope_of(name) >= 0;
  }

  // Records that `name` is used as a channel; function literals between the
  // use and the declaring scope capture it.
  void use_chan(const std::string &name, const SourceLoc &loc) {
    int scope = chan_scope_of(name);
    if (scope < 0)
      throw ParseError(loc, "'" + name + "' is not a channel variable");
    for (auto &frame : frames_) {
      if (static_cast<int>(frame.scope_base) > scope &&
          std::find(frame.captured.begin(), frame.captured.end(), name) ==
              frame.captured.end())
        frame.captured.push_back(name);
    }
  }

  // --- declarations --------------------------------------------------------

  std::vector<ConstDecl> parse_const_spec() {
    std::vector<ConstDecl> out;
    auto one = [&]() {
      std::vector<std::string> names{expect_ident("constant name")};
      while (accept_op(","))
        names.push_back(expect_ident("constant name"));
      if (!cur().is_op("="))
        parse_type();
      expect_op("=");
      std::vector<PExpr> values{parse_expr()};
      while (accept_op(","))
        values.push_back(parse_expr());
      if (values.size() != names.size())
        fail("constant declaration arity mismatch");
      for (std::size_t i = 0; i < names.size(); ++i) {
        ConstDecl c{names[i], to_expr(values[i])};
        const_table_[c.name] = c.value;
        out.push_back(std::move(c));
      }
    };
    if (accept_op("(")) {
      skip_semis();
      while (!cur().is_op(")")) {
        one();
        end_decl_in_group();
      }
      expect_op(")");
    } else {
      one();
    }
    return out;
  }

  struct TypeInfo {
    std::string text;
    bool is_chan = false;
  };

  TypeInfo parse_type() {
    std::size_t begin = pos_;
    bool is_chan = false;
    if (cur().is_kw("chan")) {
      next();
      accept_op("<-");
      if (!cur().is_op(",") && !cur().is_op(")"))
        parse_type();
      is_chan = true;
    } else if (cur().is_op("<-")) {
      next();
      if (!cur().is_kw("chan"))
        fail("expected 'chan'");
      next();
      parse_type();
      is_chan = true;
    } else if (cur().is_op("[")) {
      skip_balanced("[", "]");
      parse_type();
    } else if (cur().is_op("*") || cur().is_op("...")) {
      next();
      parse_type();
    } else if (cur().is_kw("map")) {
      next();
      expect_op("[");
      parse_type();
      expect_op("]");
      parse_type();
    } else if (cur().is_kw("func")) {
      next();
      parse_params(nullptr);
      parse_result();
    } else if (cur().is_kw("struct") || cur().is_kw("interface")) {
      next();
      skip_balanced("{", "}");
    } else if (cur().is_op("(")) {
      next();
      parse_type();
      expect_op(")");
    } else if (cur().kind == Tok::Ident) {
      next();
      if (cur().is_op(".") && peek().kind == Tok::Ident) {
        next();
        next();
      }
    } else {
      fail("expected type");
    }
    return TypeInfo{text_of(begin, pos_), is_chan};
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    expect_op(open);
    int depth = 1;
    while (depth > 0) {
      if (cur().kind == Tok::Eof)
        fail("unbalanced '" + std::string(open) + "'");
      if (cur().is_op(open))
        ++depth;
      else if (cur().is_op(close))
        --depth;
      next();
    }
  }

  bool starts_type() const {
    const Token &t = cur();
    return t.kind == Tok::Ident || t.is_kw("chan") || t.is_kw("map") ||
           t.is_kw("func") || t.is_kw("struct") || t.is_kw("interface") ||
           t.is_op("[") || t.is_op("*") || t.is_op("<-") || t.is_op("(") ||
           t.is_op("...");
  }

  // Parses a parameter list. Go allows `a, b chan int` grouping and
  // unnamed parameters; both are normalized to a flat named list.
  std::vector<Param> parse_params(std::vector<Param> *out) {
    struct Entry {
      std::string name;
      std::optional<TypeInfo> type;
    };
    std::vector<Entry> entries;
    expect_op("(");
    skip_semis();
    while (!cur().is_op(")")) {
      Entry e;
      if (cur().kind == Tok::Ident &&
          (peek().is_op(",") || peek().is_op(")") || peek().kind == Tok::Semi)) {
        e.name = cur().text;
        next();
      } else if (cur().kind == Tok::Ident && !peek().is_op(".")) {
        e.name = cur().text;
        next();
        e.type = parse_type();
      } else {
        e.type = parse_type();
      }
      entries.push_back(std::move(e));
      if (!accept_op(","))
        break;
      skip_semis();
    }
    skip_semis();
    expect_op(")");

    bool named = std::any_of(entries.begin(), entries.end(), [](const Entry &e) {
      return !e.name.empty() && e.type.has_value();
    });
    std::vector<Param> params;
    if (named) {
      std::optional<TypeInfo> pending;
      for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->type)
          pending = it->type;
        if (!pending)
          fail("parameter missing a type");
        if (it->name.empty())
          fail("mixed named and unnamed parameters");
        params.push_back(Param{it->name, pending->is_chan, pending->text});
      }
      std::reverse(params.begin(), params.end());
    } else {
      for (auto &e : entries) {
        TypeInfo t = e.type ? *e.type : TypeInfo{e.name, false};
        params.push_back(Param{"_", t.is_chan, t.text});
      }
    }
    if (out)
      *out = params;
    return params;
  }

  void parse_result() {
    if (cur().is_op("{") || cur().kind == Tok::Semi || cur().is_op(")") ||
        cur().is_op(",") || cur().is_op("]") || cur().is_op("}"))
      return;
    if (cur().is_op("(")) {
      parse_params(nullptr);
      return;
    }
    parse_type();
  }

  void parse_func_decl() {
    auto decl = std::make_shared<FuncDecl>();
    decl->loc = cur().loc;
    next(); // func
    if (cur().is_op("("))
      unsupported(decl->loc, "method declaration");
    decl->name = expect_ident("function name");
    if (cur().is_op("["))
      unsupported(cur().loc, "generic function");
    parse_params(&decl->params);
    parse_result();
    current_top_ = decl->name;
    literal_counter_ = 0;
    push_scope();
    for (auto &p : decl->params)
      if (p.is_chan)
        declare_chan(p.name);
    std::size_t first_lifted = lifted_.size();
    decl->body = parse_block();
    pop_scope();
    decls_.push_back(decl);
    for (std::size_t i = first_lifted; i < lifted_.size(); ++i)
      decls_.push_back(lifted_[i]);
    lifted_.resize(first_lifted);
  }

  // Function literal at the current position; lifted to a fresh declaration.
  std::shared_ptr<FuncDecl> parse_func_literal() {
    auto decl = std::make_shared<FuncDecl>();
    decl->loc = cur().loc;
    next(); // func
    parse_params(&decl->params);
    parse_result();
    decl->name = current_top_ + "_func" + std::to_string(++literal_counter_);
    decl->enclosing = current_top_;
    frames_.push_back(FuncFrame{scopes_.size(), {}});
    push_scope();
    for (auto &p : decl->params)
      if (p.is_chan)
        declare_chan(p.name);
    decl->body = parse_block();
    pop_scope();
    decl->captured = frames_.back().captured;
    frames_.pop_back();
    lifted_.push_back(decl);
    return decl;
  }

  // --- statements ----------------------------------------------------------

  StmtList parse_block() {
    expect_op("{");
    push_scope();
    StmtList body = parse_stmt_list();
    pop_scope();
    expect_op("}");
    return body;
  }

  StmtList parse_stmt_list() {
    StmtList out;
    skip_semis();
    while (!cur().is_op("}") && !cur().is_kw("case") && !cur().is_kw("default") &&
           cur().kind != Tok::Eof) {
      parse_stmt(out);
      if (cur().kind == Tok::Semi)
        skip_semis();
      else if (!cur().is_op("}") && !cur().is_kw("case") &&
               !cur().is_kw("default"))
        fail("expected ';' or newline after statement");
    }
    return out;
  }

  void parse_stmt(StmtList &out) {
    const Token &t = cur();
    SourceLoc loc = t.loc;
    if (t.kind == Tok::Keyword) {
      if (t.text == "go") {
        next();
        PExpr call = parse_expr();
        out.push_back(Stmt{Go{to_call(call, "go statement")}, loc});
        return;
      }
      if (t.text == "if") {
        out.push_back(parse_if());
        return;
      }
      if (t.text == "for") {
        out.push_back(parse_for());
        return;
      }
      if (t.text == "switch") {
        out.push_back(parse_switch());
        return;
      }
      if (t.text == "select") {
        out.push_back(parse_select());
        return;
      }
      if (t.text == "break") {
        next();
        if (cur().kind == Tok::Ident)
          unsupported(loc, "labelled break");
        out.push_back(Stmt{Break{}, loc});
        return;
      }
      if (t.text == "return") {
        next();
        Return r;
        if (cur().kind != Tok::Semi && !cur().is_op("}")) {
          r.values.push_back(to_expr(parse_expr()));
          while (accept_op(","))
            r.values.push_back(to_expr(parse_expr()));
        }
        out.push_back(Stmt{std::move(r), loc});
        return;
      }
      if (t.text == "const") {
        next();
        for (auto &c : parse_const_spec())
          out.push_back(Stmt{std::move(c), loc});
        return;
      }
      if (t.text == "var") {
        next();
        parse_var_decl(loc, out);
        return;
      }
      if (t.text == "func") {
        PExpr call = parse_expr();
        out.push_back(Stmt{to_call(call, "statement"), loc});
        return;
      }
      unsupported(loc, "'" + t.text + "' statement");
    }
    if (t.is_op("{")) {
      out.push_back(Stmt{Block{parse_block()}, loc});
      return;
    }
    if (t.kind == Tok::Ident && peek().is_op(":") )
      unsupported(loc, "labelled statement");
    out.push_back(parse_simple_stmt(false));
  }

  void parse_var_decl(const SourceLoc &loc, StmtList &out) {
    if (cur().is_op("("))
      unsupported(loc, "grouped var declaration");
    std::vector<std::string> names{expect_ident("variable name")};
    while (accept_op(","))
      names.push_back(expect_ident("variable name"));
    std::optional<TypeInfo> type;
    if (!cur().is_op("="))
      type = parse_type();
    if (!accept_op("=")) {
      if (type && type->is_chan)
        unsupported(loc, "nil channel declaration");
      for (auto &n : names)
        declare_value(n);
      out.push_back(Stmt{Simple{"var " + join(names) + " " + type->text, names, {}}, loc});
      return;
    }
    std::size_t rhs_begin = pos_;
    PExpr rhs = parse_expr();
    if (names.size() == 1 && is_make_chan(rhs)) {
      out.push_back(make_chan_stmt(names[0], rhs, loc));
      return;
    }
    std::vector<PExpr> values{std::move(rhs)};
    while (accept_op(","))
      values.push_back(parse_expr());
    Simple s;
    s.declared = names;
    for (auto &v : values)
      s.exprs.push_back(to_expr(v));
    s.text = "var " + join(names) + (type ? " " + type->text : "") + " = " +
             text_of(rhs_begin, pos_);
    for (auto &n : names)
      declare_value(n);
    out.push_back(Stmt{std::move(s), loc});
  }

  static std::string join(const std::vector<std::string> &names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i)
      out += (i ? ", " : "") + names[i];
    return out;
  }

  static bool is_make_chan(const PExpr &e) {
    return e.kind == PExpr::Kind::Call && e.name == "make" && !e.args.empty() &&
           e.args[0].chan_type;
  }

  Stmt make_chan_stmt(const std::string &name, const PExpr &make,
                      const SourceLoc &loc) {
    Expr cap = make.args.size() > 1 ? to_expr(make.args[1])
                                    : Expr::int_lit(0, make.loc);
    if (make.args.size() > 2)
      throw ParseError(make.loc, "too many arguments to make");
    declare_chan(name);
    return Stmt{MakeChan{name, std::move(cap)}, loc};
  }

  // Simple statements: send, receive, assignment, declaration, inc/dec, call.
  // With `allow_range`, `x := range e` yields a ForRange shell.
  Stmt parse_simple_stmt(bool allow_range, bool *is_range = nullptr) {
    SourceLoc loc = cur().loc;
    std::size_t begin = pos_;
    if (cur().is_op("<-")) {
      next();
      std::string ch = expect_ident("channel");
      use_chan(ch, loc);
      return Stmt{Recv{{}, false, ch}, loc};
    }
    if (allow_range && cur().is_kw("range")) {
      next();
      PExpr over = parse_expr();
      *is_range = true;
      return Stmt{ForRange{{}, false, to_range_expr(over), {}}, loc};
    }
    std::vector<PExpr> lhs{parse_expr()};
    while (accept_op(","))
      lhs.push_back(parse_expr());

    if (cur().is_op("<-")) {
      if (lhs.size() != 1 || lhs[0].kind != PExpr::Kind::Ident)
        throw ParseError(loc, "send target must be a channel variable");
      std::string ch = lhs[0].name;
      use_chan(ch, loc);
      next();
      PExpr value = parse_expr();
      return Stmt{Send{ch, to_expr(value)}, loc};
    }
    if (cur().is_op(":=") || cur().is_op("=")) {
      bool declares = cur().is_op(":=");
      next();
      std::vector<std::string> names;
      for (auto &l : lhs) {
        if (l.kind == PExpr::Kind::Ident)
          names.push_back(l.name);
        else if (declares)
          throw ParseError(l.loc, "non-name on left side of :=");
      }
      if (cur().is_op("<-")) {
        next();
        std::string ch = expect_ident("channel");
        use_chan(ch, loc);
        if (declares)
          for (auto &n : names)
            declare_value(n);
        return Stmt{Recv{names, declares, ch}, loc};
      }
      if (allow_range && cur().is_kw("range")) {
        next();
        PExpr over = parse_expr();
        *is_range = true;
        if (declares)
          for (auto &n : names)
            declare_value(n);
        return Stmt{ForRange{names, declares, to_range_expr(over), {}}, loc};
      }
      std::size_t rhs_begin = pos_;
      std::vector<PExpr> rhs{parse_expr()};
      while (accept_op(","))
        rhs.push_back(parse_expr());
      if (lhs.size() == 1 && rhs.size() == 1 && is_make_chan(rhs[0])) {
        if (!declares)
          unsupported(loc, "channel reassignment");
        if (lhs[0].kind != PExpr::Kind::Ident)
          throw ParseError(loc, "channel must be bound to a variable");
        return make_chan_stmt(lhs[0].name, rhs[0], loc);
      }
      Simple s;
      s.text = text_of(begin, rhs_begin - 1) + (declares ? " := " : " = ") +
               text_of(rhs_begin, pos_);
      if (declares)
        s.declared = names;
      for (auto &l : lhs)
        if (l.kind != PExpr::Kind::Ident)
          s.exprs.push_back(to_expr(l));
      for (auto &r : rhs)
        s.exprs.push_back(to_expr(r));
      for (auto &l : lhs)
        if (l.kind == PExpr::Kind::Ident && is_chan(l.name) && !declares)
          unsupported(loc, "channel reassignment");
      if (declares)
        for (auto &n : names)
          declare_value(n);
      return Stmt{std::move(s), loc};
    }
    if (lhs.size() == 1 && (cur().is_op("++") || cur().is_op("--") ||
                            is_assign_op(cur()))) {
      bool incdec = cur().is_op("++") || cur().is_op("--");
      next();
      Simple s;
      s.exprs.push_back(to_expr(lhs[0]));
      if (!incdec)
        s.exprs.push_back(to_expr(parse_expr()));
      s.text = text_of(begin, pos_);
      return Stmt{std::move(s), loc};
    }
    if (lhs.size() == 1 && lhs[0].kind == PExpr::Kind::Call) {
      if (is_close(lhs[0])) {
        const PExpr &arg = lhs[0].args[0];
        use_chan(arg.name, arg.loc);
        return Stmt{Close{arg.name}, loc};
      }
      return Stmt{to_call(lhs[0], "statement"), loc};
    }
    throw ParseError(loc, "expression is not a statement");
  }

  bool is_close(const PExpr &call) const {
    return call.name == "close" && call.args.size() == 1 &&
           call.args[0].kind == PExpr::Kind::Ident && is_chan(call.args[0].name);
  }

  Stmt parse_if() {
    SourceLoc loc = cur().loc;
    next(); // if
    push_scope();
    If node;
    bool saved = no_composite_;
    no_composite_ = true;
    Header first = parse_header(false);
    if (first.stmt) {
      if (cur().kind != Tok::Semi || cur().implicit)
        fail("expected condition");
      next();
      node.init = std::make_shared<Stmt>(std::move(*first.stmt));
      node.cond = to_expr(parse_expr());
    } else {
      node.cond = to_expr(*first.expr);
    }
    no_composite_ = saved;
    node.then_body = parse_block();
    if (cur().is_kw("else")) {
      next();
      if (cur().is_kw("if")) {
        node.else_body.push_back(parse_if());
      } else {
        node.else_body = parse_block();
      }
    }
    pop_scope();
    return Stmt{std::move(node), loc};
  }

  // Statement headers hold either an expression followed by '{' or a
  // simple statement.
  struct Header {
    std::optional<Stmt> stmt;
    std::optional<PExpr> expr;
  };

  Header parse_header(bool allow_range, bool *is_range = nullptr) {
    std::size_t save = pos_;
    if (!cur().is_kw("range")) {
      PExpr e = parse_expr();
      if (cur().is_op("{"))
        return Header{std::nullopt, std::move(e)};
      pos_ = save;
    }
    return Header{parse_simple_stmt(allow_range, is_range), std::nullopt};
  }

  Stmt parse_for() {
    SourceLoc loc = cur().loc;
    next(); // for
    push_scope();
    bool saved = no_composite_;
    no_composite_ = true;
    Stmt result{For{}, loc};
    if (cur().is_op("{")) {
      For f;
      f.form = For::Form::Infinite;
      no_composite_ = saved;
      f.body = parse_block();
      result.node = std::move(f);
      pop_scope();
      return result;
    }
    std::optional<Stmt> init;
    bool is_range = false;
    if (cur().kind != Tok::Semi) {
      Header h = parse_header(true, &is_range);
      if (h.expr) {
        For f;
        f.form = For::Form::While;
        f.while_cond = to_expr(*h.expr);
        no_composite_ = saved;
        f.body = parse_block();
        result.node = std::move(f);
        pop_scope();
        return result;
      }
      init = std::move(h.stmt);
    }
    if (is_range) {
      ForRange r = std::get<ForRange>(init->node);
      no_composite_ = saved;
      r.body = parse_block();
      result.node = std::move(r);
      pop_scope();
      return result;
    }
    For f;
    f.form = For::Form::Clause;
    if (cur().kind != Tok::Semi)
      fail("expected ';' in for clause");
    next();
    if (init)
      fill_init(f.control, *init);
    if (cur().kind != Tok::Semi) {
      PExpr cond = parse_expr();
      fill_cond(f.control, cond);
    }
    if (cur().kind != Tok::Semi)
      fail("expected ';' in for clause");
    next();
    if (!cur().is_op("{")) {
      std::size_t post_begin = pos_;
      Stmt post = parse_simple_stmt(false);
      fill_post(f.control, post, post_begin);
    }
    no_composite_ = saved;
    f.body = parse_block();
    result.node = std::move(f);
    pop_scope();
    return result;
  }

  void fill_init(LoopControl &c, const Stmt &init) {
    const Simple *s = init.as<Simple>();
    if (!s)
      throw ParseError(init.loc, "unsupported for-loop initializer");
    c.init_text = s->text;
    if (s->declared.size() == 1 && s->exprs.size() == 1) {
      c.init_var = s->declared[0];
      c.init = s->exprs[0];
    } else if (s->declared.empty() && s->exprs.size() == 1) {
      auto eq = s->text.find(" = ");
      if (eq != std::string::npos &&
          s->text.find_first_of(" ,.[(") == eq) {
        c.init_var = s->text.substr(0, eq);
        c.init = s->exprs[0];
      }
    }
  }

  void fill_cond(LoopControl &c, const PExpr &cond) {
    c.has_cond = true;
    if (cond.kind == PExpr::Kind::Binary &&
        cond.children[0].kind == PExpr::Kind::Ident) {
      const std::string &op = cond.name;
      CompareOp cmp = op == "<"    ? CompareOp::Less
                      : op == ">"  ? CompareOp::Greater
                      : op == "<=" ? CompareOp::LessEq
                      : op == ">=" ? CompareOp::GreaterEq
                      : op == "!=" ? CompareOp::NotEq
                                   : CompareOp::Other;
      if (cmp != CompareOp::Other) {
        c.cond_var = cond.children[0].name;
        c.op = cmp;
        c.bound = to_expr(cond.children[1]);
        return;
      }
    }
    c.op = CompareOp::Other;
    c.bound = to_expr(cond);
  }

  void fill_post(LoopControl &c, const Stmt &post, std::size_t begin) {
    const Simple *s = post.as<Simple>();
    if (!s)
      throw ParseError(post.loc, "unsupported for-loop post statement");
    c.has_post = true;
    c.post_text = s->text;
    if (toks_[begin].kind == Tok::Ident)
      c.post_var = toks_[begin].text;
    if (pos_ == begin + 2 && (toks_[begin + 1].is_op("++") ||
                              toks_[begin + 1].is_op("--")))
      c.mutator = toks_[begin + 1].is_op("++") ? Mutator::Inc : Mutator::Dec;
    else
      c.mutator = Mutator::Other;
  }

  Expr to_range_expr(const PExpr &over) {
    if (over.kind == PExpr::Kind::Ident && is_chan(over.name))
      unsupported(over.loc, "range over a channel");
    return to_expr(over);
  }

  Stmt parse_switch() {
    SourceLoc loc = cur().loc;
    next(); // switch
    push_scope();
    Switch sw;
    bool saved = no_composite_;
    no_composite_ = true;
    if (!cur().is_op("{")) {
      Header first;
      if (cur().kind != Tok::Semi)
        first = parse_header(false);
      if (first.expr) {
        sw.tag = to_expr(*first.expr);
      } else {
        if (cur().kind != Tok::Semi || cur().implicit)
          fail("expected switch tag or '{'");
        next();
        if (first.stmt)
          sw.init = std::make_shared<Stmt>(std::move(*first.stmt));
        if (!cur().is_op("{"))
          sw.tag = to_expr(parse_expr());
      }
    }
    no_composite_ = saved;
    expect_op("{");
    skip_semis();
    while (!cur().is_op("}")) {
      std::vector<Expr> labels;
      if (cur().is_kw("case")) {
        next();
        labels.push_back(to_expr(parse_expr()));
        while (accept_op(","))
          labels.push_back(to_expr(parse_expr()));
      } else if (cur().is_kw("default")) {
        if (sw.default_index >= 0)
          fail("multiple defaults in switch");
        next();
        sw.default_index = static_cast<int>(sw.branches.size());
      } else {
        fail("expected 'case' or 'default'");
      }
      expect_op(":");
      push_scope();
      sw.branches.push_back(parse_stmt_list());
      pop_scope();
      sw.labels.push_back(std::move(labels));
    }
    expect_op("}");
    pop_scope();
    return Stmt{std::move(sw), loc};
  }

  Stmt parse_select() {
    SourceLoc loc = cur().loc;
    next(); // select
    Select sel;
    expect_op("{");
    skip_semis();
    while (!cur().is_op("}")) {
      SourceLoc case_loc = cur().loc;
      if (cur().is_kw("default")) {
        if (sel.default_body)
          throw ParseError(case_loc, "select has more than one default branch");
        next();
        expect_op(":");
        sel.default_loc = case_loc;
        push_scope();
        sel.default_body = parse_stmt_list();
        pop_scope();
        continue;
      }
      if (!cur().is_kw("case"))
        fail("expected 'case' or 'default'");
      next();
      push_scope();
      Stmt comm = parse_simple_stmt(false);
      CommClause clause;
      clause.loc = case_loc;
      if (const Send *s = comm.as<Send>())
        clause.comm = *s;
      else if (const Recv *r = comm.as<Recv>())
        clause.comm = *r;
      else
        throw ParseError(case_loc, "select case must be a send or receive");
      expect_op(":");
      clause.body = parse_stmt_list();
      pop_scope();
      sel.cases.push_back(std::move(clause));
    }
    expect_op("}");
    return Stmt{std::move(sel), loc};
  }

  // --- calls ---------------------------------------------------------------

  Call to_call(const PExpr &e, const std::string &context) {
    if (e.kind != PExpr::Kind::Call)
      throw ParseError(e.loc, context + " requires a function call");
    const PExpr &callee = e.children[0];
    if (callee.has_recv)
      throw ParseError(e.loc, "receive operations inside expressions are not supported");
    Call call;
    if (callee.literal) {
      call.callee = callee.literal->name;
      call.literal = callee.literal;
    } else if (callee.kind == PExpr::Kind::Ident ||
               (callee.kind == PExpr::Kind::Other && !callee.has_literal)) {
      call.callee = e.name;
    } else {
      throw ParseError(e.loc, "unsupported call target");
    }
    if (call.callee == "make")
      throw ParseError(e.loc, "channel creation must be bound with ':='");
    for (const PExpr &a : e.args) {
      Arg arg;
      if (a.kind == PExpr::Kind::Ident && is_chan(a.name)) {
        use_chan(a.name, a.loc);
        arg.is_chan = true;
        arg.chan = a.name;
      } else {
        arg.value = to_expr(a);
      }
      call.args.push_back(std::move(arg));
    }
    if (call.literal) {
      for (const std::string &name : call.literal->captured) {
        use_chan(name, e.loc);
        Arg arg;
        arg.is_chan = true;
        arg.chan = name;
        call.args.push_back(std::move(arg));
      }
    }
    return call;
  }

  Expr to_expr(const PExpr &e) const {
    if (e.has_recv)
      throw ParseError(e.loc, "receive operations inside expressions are not supported");
    if (e.has_literal || e.literal)
      throw ParseError(e.loc, "function literals are only supported in go or call statements");
    if (e.has_make || e.chan_type || is_make_chan(e))
      throw ParseError(e.loc, "channel creation must be bound with ':='");
    if (e.kind == PExpr::Kind::Ident) {
      if (e.name == "true" || e.name == "false")
        return Expr::bool_lit(e.name == "true", e.loc);
      return Expr::var(e.name, e.loc);
    }
    if (e.kind == PExpr::Kind::Int) {
      if (auto v = parse_int_text(toks_[e.begin].text))
        return Expr::int_lit(*v, e.loc);
    }
    if (e.kind == PExpr::Kind::Unary && e.name == "-" &&
        e.children[0].kind == PExpr::Kind::Int) {
      if (auto v = parse_int_text(toks_[e.children[0].begin].text))
        return Expr::int_lit(-*v, e.loc);
    }
    return Expr::opaque(text_of(e.begin, e.end), idents_of(e.begin, e.end), e.loc);
  }

  // --- expressions ---------------------------------------------------------

  PExpr parse_expr(int min_prec = 1) {
    PExpr lhs = parse_unary();
    while (true) {
      int prec = binary_precedence(cur());
      if (prec < min_prec || prec == 0)
        break;
      std::string op = cur().text;
      next();
      PExpr rhs = parse_expr(prec + 1);
      PExpr bin;
      bin.kind = PExpr::Kind::Binary;
      bin.name = op;
      bin.begin = lhs.begin;
      bin.end = rhs.end;
      bin.loc = lhs.loc;
      merge_flags(bin, lhs);
      merge_flags(bin, rhs);
      bin.children.push_back(std::move(lhs));
      bin.children.push_back(std::move(rhs));
      lhs = std::move(bin);
    }
    return lhs;
  }

  static void merge_flags(PExpr &into, const PExpr &from) {
    into.has_recv |= from.has_recv;
    into.has_literal |= from.has_literal || static_cast<bool>(from.literal);
    into.has_make |= from.has_make || is_make_chan(from);
  }

  PExpr parse_unary() {
    const Token &t = cur();
    if (t.kind == Tok::Op && (t.text == "+" || t.text == "-" || t.text == "!" ||
                              t.text == "^" || t.text == "*" || t.text == "&" ||
                              t.text == "<-")) {
      std::size_t begin = pos_;
      SourceLoc loc = t.loc;
      bool recv = t.text == "<-";
      std::string op = t.text;
      next();
      PExpr operand = parse_unary();
      PExpr u;
      u.kind = PExpr::Kind::Unary;
      u.name = op;
      u.begin = begin;
      u.end = operand.end;
      u.loc = loc;
      merge_flags(u, operand);
      u.has_recv |= recv;
      u.children.push_back(std::move(operand));
      return u;
    }
    return parse_primary();
  }

  PExpr parse_operand() {
    PExpr e;
    e.begin = pos_;
    e.loc = cur().loc;
    const Token &t = cur();
    switch (t.kind) {
    case Tok::Ident:
      e.kind = PExpr::Kind::Ident;
      e.name = t.text;
      next();
      break;
    case Tok::Int:
      e.kind = PExpr::Kind::Int;
      next();
      break;
    case Tok::Float:
    case Tok::String:
    case Tok::Char:
      e.kind = PExpr::Kind::Other;
      next();
      break;
    case Tok::Keyword:
      if (t.text == "func") {
        e.literal = parse_func_literal();
        e.kind = PExpr::Kind::Other;
        break;
      }
      if (t.text == "chan" || t.text == "map" || t.text == "struct" ||
          t.text == "interface") {
        TypeInfo ti = parse_type();
        e.kind = PExpr::Kind::Type;
        e.chan_type = ti.is_chan;
        break;
      }
      fail("expected expression");
    case Tok::Op:
      if (t.text == "(") {
        next();
        bool saved = no_composite_;
        no_composite_ = false;
        PExpr inner = parse_expr();
        no_composite_ = saved;
        expect_op(")");
        e.kind = PExpr::Kind::Other;
        merge_flags(e, inner);
        break;
      }
      if (t.text == "[") {
        parse_type();
        e.kind = PExpr::Kind::Type;
        break;
      }
      fail("expected expression");
    default:
      fail("expected expression");
    }
    e.end = pos_;
    return e;
  }

  PExpr parse_primary() {
    PExpr e = parse_operand();
    while (true) {
      if (cur().is_op(".")) {
        next();
        if (accept_op("(")) {
          if (cur().is_kw("type"))
            unsupported(cur().loc, "type switch");
          parse_type();
          expect_op(")");
        } else {
          expect_ident("selector");
        }
        e.kind = PExpr::Kind::Other;
        e.end = pos_;
      } else if (cur().is_op("[")) {
        next();
        bool saved = no_composite_;
        no_composite_ = false;
        while (!cur().is_op("]")) {
          if (cur().is_op(":")) {
            next();
            continue;
          }
          PExpr idx = parse_expr();
          merge_flags(e, idx);
        }
        no_composite_ = saved;
        expect_op("]");
        e.kind = PExpr::Kind::Other;
        e.end = pos_;
      } else if (cur().is_op("(")) {
        PExpr call;
        call.kind = PExpr::Kind::Call;
        call.begin = e.begin;
        call.loc = e.loc;
        call.name = e.literal ? e.literal->name : text_of(e.begin, e.end);
        next();
        bool saved = no_composite_;
        no_composite_ = false;
        skip_semis();
        while (!cur().is_op(")")) {
          PExpr arg;
          if (call.name == "make" && call.args.empty() && starts_type() &&
              !(cur().kind == Tok::Ident)) {
            arg.begin = pos_;
            arg.loc = cur().loc;
            TypeInfo ti = parse_type();
            arg.kind = PExpr::Kind::Type;
            arg.chan_type = ti.is_chan;
            arg.end = pos_;
          } else {
            arg = parse_expr();
          }
          accept_op("...");
          merge_flags(call, arg);
          call.args.push_back(std::move(arg));
          if (!accept_op(","))
            break;
          skip_semis();
        }
        skip_semis();
        no_composite_ = saved;
        expect_op(")");
        call.end = pos_;
        call.has_literal |= e.has_literal;
        call.has_recv |= e.has_recv;
        call.children.push_back(std::move(e));
        e = std::move(call);
      } else if (cur().is_op("{") && !no_composite_ && is_type_like(e)) {
        skip_balanced("{", "}");
        e.kind = PExpr::Kind::Other;
        e.end = pos_;
      } else {
        break;
      }
    }
    return e;
  }

  static bool is_type_like(const PExpr &e) {
    return e.kind == PExpr::Kind::Ident || e.kind == PExpr::Kind::Type ||
           (e.kind == PExpr::Kind::Other && !e.literal);
  }

  // --- constants -----------------------------------------------------------

  std::optional<std::int64_t> const_value(const std::string &name,
                                          int depth = 0) const {
    auto it = const_table_.find(name);
    if (it == const_table_.end() || depth > 32)
      return std::nullopt;
    const Expr &v = it->second;
    if (v.kind == Expr::Kind::IntLit)
      return v.int_value;
    if (v.kind == Expr::Kind::Var)
      return const_value(v.text, depth + 1);
    if (v.kind == Expr::Kind::Opaque)
      return parse_int_text(v.text);
    return std::nullopt;
  }

  void substitute(Expr &e) const {
    if (e.kind == Expr::Kind::Var) {
      if (auto v = const_value(e.text)) {
        SourceLoc loc = e.loc;
        e = Expr::int_lit(*v, loc);
      }
    }
  }

  void substitute(StmtList &list) const {
    for (Stmt &s : list)
      substitute(s);
  }

  void substitute(Stmt &s) const {
    std::visit(
        [&](auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MakeChan>) {
            substitute(n.capacity);
          } else if constexpr (std::is_same_v<T, Send>) {
            substitute(n.value);
          } else if constexpr (std::is_same_v<T, Select>) {
            for (auto &c : n.cases) {
              if (auto *snd = std::get_if<Send>(&c.comm))
                substitute(snd->value);
              substitute(c.body);
            }
            if (n.default_body)
              substitute(*n.default_body);
          } else if constexpr (std::is_same_v<T, Call>) {
            for (auto &a : n.args)
              if (!a.is_chan)
                substitute(a.value);
          } else if constexpr (std::is_same_v<T, Go>) {
            for (auto &a : n.call.args)
              if (!a.is_chan)
                substitute(a.value);
          } else if constexpr (std::is_same_v<T, Block>) {
            substitute(n.body);
          } else if constexpr (std::is_same_v<T, If>) {
            if (n.init)
              substitute(*n.init);
            substitute(n.cond);
            substitute(n.then_body);
            substitute(n.else_body);
          } else if constexpr (std::is_same_v<T, For>) {
            if (n.control.init)
              substitute(*n.control.init);
            if (n.control.bound)
              substitute(*n.control.bound);
            if (n.while_cond)
              substitute(*n.while_cond);
            substitute(n.body);
          } else if constexpr (std::is_same_v<T, ForRange>) {
            substitute(n.over);
            substitute(n.body);
          } else if constexpr (std::is_same_v<T, Switch>) {
            if (n.init)
              substitute(*n.init);
            for (auto &b : n.branches)
              substitute(b);
          } else if constexpr (std::is_same_v<T, Simple>) {
            for (auto &e : n.exprs)
              substitute(e);
          }
        },
        s.node);
  }

  void substitute_constants() {
    if (const_table_.empty())
      return;
    for (auto &d : decls_)
      substitute(d->body);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program program_;
  std::vector<std::shared_ptr<FuncDecl>> decls_;
  std::vector<std::shared_ptr<FuncDecl>> lifted_;
  std::vector<std::set<std::string>> scopes_;
  std::vector<FuncFrame> frames_;
  std::map<std::string, Expr> const_table_;
  std::string current_top_;
  int literal_counter_ = 0;
  bool no_composite_ = false;
};

} // namespace

Program parse_program(std::string_view source, const std::string &file) {
  Parser parser(tokenize(source, file), file);
  return parser.run();
}

Program parse_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str(), path);
}

} // namespace minigo
