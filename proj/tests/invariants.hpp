#pragma once

#include <string>
#include <vector>

#include "minigo/ast.hpp"
#include "minigo/builder.hpp"
#include "minigo/checker.hpp"
#include "minigo/model.hpp"

namespace inv {

/// Processes the model may spawn while inside an NDLoop or ForeverLoop,
/// following blocking calls into their bodies.
std::vector<std::string> unbounded_spawns(const minigo::BehaviouralModel &m);

struct EnvDiscard {
  int checked = 0;
  std::vector<std::string> failures;
};

/// Translates `body` statement by statement and checks that every If and
/// Select leaves the parameter map's domain as it found it. Recurses into
/// nested statement lists.
void check_env_discard(minigo::Translator &t, const minigo::FuncDecl &fn,
                       EnvDiscard &out);

struct MonitorCheck {
  std::size_t states = 0;
  std::size_t error_edges = 0;
  std::vector<std::string> failures;
};

/// Explores every reachable state of `m` and checks each transition
/// against the monitor automaton: the error state appears exactly when a
/// close or acknowledged send hits a channel that is already closed.
MonitorCheck check_monitor(const minigo::BehaviouralModel &m,
                           const minigo::Bounds &bounds);

/// Whether `trace` contains a close on some channel followed later by a
/// close or acknowledged send on the same channel.
bool close_then_use(const std::vector<minigo::TraceEvent> &trace);

} // namespace inv
