#include "minigo/params.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "minigo/errors.hpp"

namespace minigo {

const char *to_string(ParamSymbol::Role role) {
  return role == ParamSymbol::Role::Capacity ? "capacity" : "loop-bound";
}

std::string symbol_base(const std::string &text) {
  std::string out;
  for (char c : text) {
    bool keep = std::isalnum(static_cast<unsigned char>(c));
    if (keep)
      out += c;
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_')
    out.pop_back();
  if (out.empty())
    return "param";
  if (std::isdigit(static_cast<unsigned char>(out[0])))
    out = "p_" + out;
  return out;
}

const ParamSymbol *ParamEnv::find(const Expr &e) const {
  for (const auto &[key, sym] : bindings_)
    if (key == e.text)
      return &sym;
  return nullptr;
}

std::optional<ParamRef> ParamEnv::resolve(const Expr &e) const {
  if (e.kind == Expr::Kind::IntLit)
    return ParamRef::literal(e.int_value);
  if (const ParamSymbol *s = find(e))
    return ParamRef::named(s->name);
  return std::nullopt;
}

std::string ParamEnv::next_name(const std::string &base) {
  int &counter = counters_[base];
  return base + "_" + std::to_string(counter++);
}

ParamSymbol ParamEnv::bind(const Expr &e, ParamSymbol::Role role) {
  ParamSymbol s;
  s.name = next_name(symbol_base(e.text));
  s.origin = e.loc;
  s.kind = ParamSymbol::Kind::Free;
  s.role = role;
  s.source = e.text;
  bindings_.emplace_back(e.text, s);
  return s;
}

ParamSymbol ParamEnv::fresh(ParamSymbol::Role role, const SourceLoc &origin) {
  ParamSymbol s;
  s.name = next_name("fresh");
  s.origin = origin;
  s.kind = ParamSymbol::Kind::Free;
  s.role = role;
  return s;
}

void ParamEnv::adopt_counters(const ParamEnv &other) {
  for (const auto &[base, n] : other.counters_) {
    int &mine = counters_[base];
    mine = std::max(mine, n);
  }
}

BoundPair bound_extract(const LoopControl &b) {
  BoundPair none;
  if (!b.init || !b.has_cond || !b.bound || !b.has_post)
    return none;
  if (b.init_var.empty() || b.init_var != b.cond_var ||
      b.init_var != b.post_var)
    return none;
  Expr bound = *b.bound;
  CompareOp op = b.op;
  if (op == CompareOp::LessEq || op == CompareOp::GreaterEq) {
    if (bound.kind != Expr::Kind::IntLit)
      return none;
    bool up = op == CompareOp::LessEq;
    bound = Expr::int_lit(bound.int_value + (up ? 1 : -1), bound.loc);
    op = up ? CompareOp::Less : CompareOp::Greater;
  }
  if (op == CompareOp::Less && b.mutator == Mutator::Inc)
    return BoundPair{*b.init, bound};
  if (op == CompareOp::Greater && b.mutator == Mutator::Dec)
    return BoundPair{bound, *b.init};
  return none;
}

LookupResult lookup(const ParamEnv &env, const LoopControl &b,
                    ParamSymbol::Role role) {
  LookupResult r;
  r.env = env;
  BoundPair pair = bound_extract(b);
  if (!pair.present()) {
    SourceLoc origin = b.bound ? b.bound->loc : b.init ? b.init->loc : SourceLoc{};
    ParamSymbol x = r.env.fresh(role, origin);
    ParamSymbol y = r.env.fresh(role, origin);
    r.lower = ParamRef::named(x.name);
    r.upper = ParamRef::named(y.name);
    r.issued = {x, y};
    return r;
  }
  r.recognized = true;
  auto resolve = [&](const Expr &e) {
    if (auto ref = r.env.resolve(e))
      return *ref;
    ParamSymbol s = r.env.bind(e, role);
    r.issued.push_back(s);
    return ParamRef::named(s.name);
  };
  r.lower = resolve(*pair.lower);
  r.upper = resolve(*pair.upper);
  return r;
}

LoopControl counting_loop(const Expr &upper) {
  LoopControl c;
  c.init_var = c.cond_var = c.post_var = "i";
  c.init = Expr::int_lit(0, upper.loc);
  c.op = CompareOp::Less;
  c.bound = upper;
  c.mutator = Mutator::Inc;
  c.has_cond = c.has_post = true;
  c.init_text = "i := 0";
  c.post_text = "i++";
  return c;
}

bool is_external_callee(const std::string &name) {
  static const std::set<std::string> builtins = {
      "append", "cap",   "clear", "close",   "complex", "copy",
      "delete", "imag",  "len",   "make",    "max",     "min",
      "new",    "panic", "print", "println", "real",    "recover"};
  return name.find('.') != std::string::npos || builtins.count(name) > 0;
}

namespace {

class SpawnScan {
public:
  SpawnScan(const Program &p, bool lenient) : program_(p), lenient_(lenient) {}

  bool body(const StmtList &stmts) {
    for (const Stmt &s : stmts)
      if (stmt(s))
        return true;
    return false;
  }

private:
  bool call(const Call &c, const SourceLoc &loc) {
    const FuncDecl *callee = c.literal ? c.literal.get() : program_.find(c.callee);
    if (!callee) {
      if (is_external_callee(c.callee) || lenient_)
        return false;
      throw ModelError(ModelError::Kind::UnknownFunction, loc,
                       "call to undeclared function '" + c.callee + "'");
    }
    if (!visiting_.insert(callee->name).second)
      return false;
    return body(callee->body);
  }

  bool stmt(const Stmt &s) {
    return std::visit(
        [&](const auto &n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Go>) {
            return true;
          } else if constexpr (std::is_same_v<T, Call>) {
            return call(n, s.loc);
          } else if constexpr (std::is_same_v<T, Select>) {
            for (const CommClause &c : n.cases)
              if (body(c.body))
                return true;
            return n.default_body && body(*n.default_body);
          } else if constexpr (std::is_same_v<T, Block>) {
            return body(n.body);
          } else if constexpr (std::is_same_v<T, If>) {
            return (n.init && stmt(*n.init)) || body(n.then_body) ||
                   body(n.else_body);
          } else if constexpr (std::is_same_v<T, For> ||
                               std::is_same_v<T, ForRange>) {
            return body(n.body);
          } else if constexpr (std::is_same_v<T, Switch>) {
            if (n.init && stmt(*n.init))
              return true;
            for (const StmtList &b : n.branches)
              if (body(b))
                return true;
            return false;
          } else {
            return false;
          }
        },
        s.node);
  }

  const Program &program_;
  bool lenient_;
  // A function already under inspection adds nothing new.
  std::set<std::string> visiting_;
};

} // namespace

bool spawns(const StmtList &body, const Program &program, bool lenient) {
  return SpawnScan(program, lenient).body(body);
}

} // namespace minigo
