#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "minigo/ast.hpp"
#include "minigo/params.hpp"

namespace minigo {

struct ChanDecl {
  std::string name;
  ParamRef capacity;
  bool monitored = false;
  /// Creation site, `<function>.<variable>`.
  std::string site;
  SourceLoc loc;
};

struct IRStmt;
using IRList = std::vector<IRStmt>;

struct SendIn {
  std::string chan;
};
struct RecvIn {
  std::string chan;
};
/// Receive on the monitor's `sending` channel after a send.
struct MonSendAck {
  std::string chan;
};
/// Receive on the monitor's `closing` channel.
struct MonClose {
  std::string chan;
};
struct NDChoice {
  std::vector<IRList> branches;
};
/// Guard of a select branch.
struct Comm {
  bool is_send = false;
  std::string chan;
  SourceLoc loc;
};
struct GuardedBranch {
  Comm guard;
  IRList cont;
};
struct GuardedChoice {
  std::vector<GuardedBranch> branches;
  std::optional<IRList> default_branch;
};
/// Spawn a process and wait for its completion signal.
struct RunBlocking {
  std::string proc;
  std::vector<std::string> args;
};
struct RunAsync {
  std::string proc;
  std::vector<std::string> args;
};
/// Runs max(0, to - from) iterations.
struct BoundedFor {
  ParamRef from;
  ParamRef to;
  IRList body;
};
/// Each iteration may run the body or leave.
struct NDLoop {
  IRList body;
};
/// Runs the body until a break or return.
struct ForeverLoop {
  IRList body;
};
struct DeclareChan {
  ChanDecl decl;
};
struct Skip {};
struct BreakLoop {};
struct ReturnProc {};

struct IRStmt {
  using Node = std::variant<SendIn, RecvIn, MonSendAck, MonClose, NDChoice,
                            GuardedChoice, RunBlocking, RunAsync, BoundedFor,
                            NDLoop, ForeverLoop, DeclareChan, Skip, BreakLoop,
                            ReturnProc>;
  Node node;
  SourceLoc loc;

  template <typename T> const T *as() const { return std::get_if<T>(&node); }
};

struct ProcDef {
  std::string name;
  /// Function the process runs.
  std::string callee;
  std::vector<std::string> chan_params;
  IRList body;
  /// Blocking-call processes signal completion as their last action.
  bool completion_signal = false;
  SourceLoc loc;
};

struct BehaviouralModel {
  std::string file;
  std::string name;
  ProcDef entry;
  std::vector<ProcDef> procs;
  /// Every channel creation in the model, in translation order.
  std::vector<ChanDecl> channels;
  std::vector<ParamSymbol> free_params;
  /// Names of monitored channels.
  std::set<std::string> monitored;

  const ProcDef *find_proc(const std::string &name) const;
};

/// Canonical text form: one constructor per line, deterministic.
std::string to_text(const BehaviouralModel &model);
std::string to_text(const IRList &body, int indent = 0);

/// Calls `fn` on every IR statement, nested ones included.
template <typename Fn> void walk_ir(const IRList &body, Fn &&fn) {
  for (const IRStmt &s : body) {
    fn(s);
    if (auto *c = s.as<NDChoice>()) {
      for (const IRList &b : c->branches)
        walk_ir(b, fn);
    } else if (auto *g = s.as<GuardedChoice>()) {
      for (const GuardedBranch &b : g->branches)
        walk_ir(b.cont, fn);
      if (g->default_branch)
        walk_ir(*g->default_branch, fn);
    } else if (auto *f = s.as<BoundedFor>()) {
      walk_ir(f->body, fn);
    } else if (auto *l = s.as<NDLoop>()) {
      walk_ir(l->body, fn);
    } else if (auto *e = s.as<ForeverLoop>()) {
      walk_ir(e->body, fn);
    }
  }
}

} // namespace minigo
