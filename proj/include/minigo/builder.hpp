#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "minigo/ast.hpp"
#include "minigo/model.hpp"
#include "minigo/params.hpp"

namespace minigo {

/// Declarations without channel parameters, in program order. Each is the
/// entry of an independent model.
std::vector<const FuncDecl *> partition_program(const Program &program);

/// Translates statements of one partition into model IR.
class Translator {
public:
  Translator(const Program &program, const FuncDecl &entry);
  ~Translator();

  struct Result {
    ParamEnv env;
    IRList ir;
  };

  /// Translates `stmts`, which belong to function `fn`, starting from
  /// `env`. The returned env is the one the continuation would see.
  Result trans_stmts(const ParamEnv &env, const StmtList &stmts,
                     const FuncDecl &fn);

  /// Whether channel `name` in function `fn` may alias a closed channel.
  bool is_monitored(const FuncDecl &fn, const std::string &name) const;

  /// Translates the whole partition.
  BehaviouralModel build();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Builds the model rooted at `entry`. Throws ModelError for undeclared
/// callees with channel arguments, arity mismatches and unsupported
/// statements.
BehaviouralModel build_model(const FuncDecl &entry, const Program &program);

} // namespace minigo
