#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace minigo {

/// Position of a node in its input file. Lines and columns are 1-based.
struct SourceLoc {
  std::shared_ptr<const std::string> file;
  int line = 0;
  int column = 0;

  const std::string &file_name() const;
  std::string str() const;
  bool operator==(const SourceLoc &other) const;
};

/// Value expression. Anything the grammar does not model is kept as an
/// Opaque node keyed by its normalized token text.
struct Expr {
  enum class Kind { IntLit, BoolLit, Var, Opaque };

  Kind kind = Kind::Opaque;
  std::int64_t int_value = 0;
  bool bool_value = false;
  /// Var: identifier. Opaque: normalized text. Literals: canonical spelling.
  std::string text;
  /// Identifiers occurring in the expression, in order of appearance.
  std::vector<std::string> idents;
  SourceLoc loc;

  static Expr int_lit(std::int64_t n, SourceLoc loc = {});
  static Expr bool_lit(bool b, SourceLoc loc = {});
  static Expr var(std::string name, SourceLoc loc = {});
  static Expr opaque(std::string normalized, std::vector<std::string> idents,
                     SourceLoc loc = {});

  bool is_int() const { return kind == Kind::IntLit; }

  // Structural equality: location is ignored.
  bool operator==(const Expr &other) const;
};

/// Whitespace-insensitive canonical form of a token sequence.
std::string normalize_expr_text(const std::vector<std::string> &tokens);

struct Stmt;
using StmtList = std::vector<Stmt>;
struct FuncDecl;

struct MakeChan {
  std::string chan;
  Expr capacity;
};

struct Send {
  std::string chan;
  Expr value;
};

struct Recv {
  /// Bound variables (`v` or `v, ok`); empty for a bare `<-ch`.
  std::vector<std::string> vars;
  bool declares = false;
  std::string chan;
};

struct Close {
  std::string chan;
};

struct CommClause {
  std::variant<Send, Recv> comm;
  StmtList body;
  SourceLoc loc;
};

struct Select {
  std::vector<CommClause> cases;
  std::optional<StmtList> default_body;
  SourceLoc default_loc;
};

/// Call argument: either a channel variable or a value expression.
struct Arg {
  bool is_chan = false;
  std::string chan;
  Expr value;
};

/// `f(args)` or `go f(args)`. Function literals are lifted to a fresh
/// declaration at parse time; `literal` points at it.
struct Call {
  std::string callee;
  std::vector<Arg> args;
  std::shared_ptr<const FuncDecl> literal;
};

struct Go {
  Call call;
};

struct Block {
  StmtList body;
};

struct If {
  std::shared_ptr<Stmt> init;
  Expr cond;
  StmtList then_body;
  StmtList else_body;
};

enum class CompareOp { Less, Greater, LessEq, GreaterEq, NotEq, Other };
enum class Mutator { Inc, Dec, Other };

/// `v := e1; v op e2; r`. Any part may be missing.
struct LoopControl {
  std::string init_var;
  std::optional<Expr> init;
  std::string cond_var;
  CompareOp op = CompareOp::Other;
  std::optional<Expr> bound;
  std::string post_var;
  Mutator mutator = Mutator::Other;
  bool has_cond = false;
  bool has_post = false;
  /// Normalized source of the init and post statements, for printing.
  std::string init_text;
  std::string post_text;
};

struct For {
  enum class Form { Infinite, While, Clause };
  Form form = Form::Clause;
  LoopControl control;
  /// Condition of a `for cond {}` loop.
  std::optional<Expr> while_cond;
  StmtList body;
};

struct ForRange {
  std::vector<std::string> vars;
  bool declares = false;
  Expr over;
  StmtList body;
};

struct Switch {
  std::shared_ptr<Stmt> init;
  std::optional<Expr> tag;
  /// One entry per case clause; the default clause, if any, is flagged.
  std::vector<StmtList> branches;
  std::vector<std::vector<Expr>> labels;
  int default_index = -1;
};

struct Break {};

struct Return {
  std::vector<Expr> values;
};

/// Assignment, declaration, inc/dec or other statement with no
/// communication effect. `declared` lists names introduced by it.
struct Simple {
  std::string text;
  std::vector<std::string> declared;
  std::vector<Expr> exprs;
};

struct ConstDecl {
  std::string name;
  Expr value;
};

struct Stmt {
  using Node = std::variant<MakeChan, Send, Recv, Close, Select, Call, Go,
                            Block, If, For, ForRange, Switch, Break, Return,
                            Simple, ConstDecl>;
  Node node;
  SourceLoc loc;

  template <typename T> const T *as() const { return std::get_if<T>(&node); }
};

struct Param {
  std::string name;
  bool is_chan = false;
  std::string type;
};

struct FuncDecl {
  std::string name;
  std::vector<Param> params;
  /// Channel variables captured from the enclosing scope (function
  /// literals only). They become trailing channel parameters.
  std::vector<std::string> captured;
  StmtList body;
  SourceLoc loc;
  /// Name of the enclosing declaration for lifted function literals.
  std::string enclosing;
  bool is_literal() const { return !enclosing.empty(); }

  std::vector<std::string> chan_params() const;
  bool has_chan_params() const { return !chan_params().empty(); }
};

struct Program {
  std::string file;
  /// Declarations in source order, with lifted function literals placed
  /// right after the declaration that contains them.
  std::vector<std::shared_ptr<const FuncDecl>> decls;
  std::vector<ConstDecl> consts;

  const FuncDecl *find(const std::string &name) const;
  /// Source-level declarations only (no lifted literals).
  std::vector<const FuncDecl *> top_level() const;
};

/// Calls `fn` on every statement of `body`, nested ones included, in
/// source order. If and switch init statements come before their bodies.
void for_each_stmt(const StmtList &body,
                   const std::function<void(const Stmt &)> &fn);

} // namespace minigo
