#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minigo/ast.hpp"

namespace minigo {

/// A communication-related model parameter.
struct ParamSymbol {
  enum class Kind { Literal, Free };
  enum class Role { Capacity, LoopBound };

  std::string name;
  SourceLoc origin;
  Kind kind = Kind::Free;
  std::int64_t value = 0; // Literal only
  Role role = Role::LoopBound;
  /// Normalized text of the expression it stands for; empty for symbols
  /// issued for loops whose bounds could not be extracted.
  std::string source;

  bool operator==(const ParamSymbol &other) const {
    return name == other.name && kind == other.kind && value == other.value;
  }
};

const char *to_string(ParamSymbol::Role role);

/// Loop bound or capacity in a model: an integer or a symbol name.
struct ParamRef {
  bool is_literal = true;
  std::int64_t value = 0;
  std::string symbol;

  static ParamRef literal(std::int64_t n) { return ParamRef{true, n, {}}; }
  static ParamRef named(std::string name) {
    return ParamRef{false, 0, std::move(name)};
  }
  std::string str() const {
    return is_literal ? std::to_string(value) : symbol;
  }
  bool operator==(const ParamRef &other) const {
    return is_literal == other.is_literal &&
           (is_literal ? value == other.value : symbol == other.symbol);
  }
};

/// The map from source expressions to parameter symbols. Integer
/// literals are never stored: they always resolve to themselves.
class ParamEnv {
public:
  const ParamSymbol *find(const Expr &e) const;
  bool contains(const Expr &e) const {
    return e.kind == Expr::Kind::IntLit || find(e) != nullptr;
  }
  /// Resolves `e`; literals map to themselves. Nullopt when unbound.
  std::optional<ParamRef> resolve(const Expr &e) const;

  /// Binds `e` to a new symbol derived from its text.
  ParamSymbol bind(const Expr &e, ParamSymbol::Role role);
  /// Issues a symbol that is not recorded in the bindings.
  ParamSymbol fresh(ParamSymbol::Role role, const SourceLoc &origin);

  /// Keeps naming counters at least as far as `other`'s, so symbols issued
  /// in a discarded environment are never issued again.
  void adopt_counters(const ParamEnv &other);

  std::size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<std::string, ParamSymbol>> &bindings() const {
    return bindings_;
  }

  // Compares bindings only.
  bool operator==(const ParamEnv &other) const {
    return bindings_ == other.bindings_;
  }
  bool operator!=(const ParamEnv &other) const { return !(*this == other); }

private:
  std::string next_name(const std::string &base);

  // Keyed by normalized expression text, in insertion order.
  std::vector<std::pair<std::string, ParamSymbol>> bindings_;
  std::map<std::string, int> counters_;
};

/// Sanitized symbol base for an expression text, e.g. "len(files)" gives
/// "len_files".
std::string symbol_base(const std::string &text);

/// Lower and upper bound expressions of a loop header, when its shape is
/// recognized.
struct BoundPair {
  std::optional<Expr> lower;
  std::optional<Expr> upper;
  bool present() const { return lower.has_value() && upper.has_value(); }
};

/// (e1, e2) for `v := e1; v < e2; v++` and (e2, e1) for
/// `v := e1; v > e2; v--`. Non-strict comparisons against an integer
/// literal are shifted by one; anything else yields an empty pair.
BoundPair bound_extract(const LoopControl &b);

struct LookupResult {
  ParamEnv env;
  ParamRef lower;
  ParamRef upper;
  bool recognized = false;
  /// Symbols issued by this call, in order.
  std::vector<ParamSymbol> issued;
};

/// Resolves the bounds of `b` against `env`. Unknown bound expressions are
/// bound to new symbols. When the shape is not recognized, two fresh
/// symbols are issued and the returned bindings equal `env`'s.
LookupResult lookup(const ParamEnv &env, const LoopControl &b,
                    ParamSymbol::Role role = ParamSymbol::Role::LoopBound);

/// Control for `i := 0; i < e; i++`.
LoopControl counting_loop(const Expr &upper);

/// True when `body` contains a go statement, directly or in a function it
/// calls, transitively. Calls to undeclared names throw
/// ModelError(UnknownFunction) unless `lenient`; qualified names and Go
/// builtins are external and never spawn.
bool spawns(const StmtList &body, const Program &program, bool lenient = false);

bool is_external_callee(const std::string &name);

} // namespace minigo
