#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minigo/model.hpp"

namespace minigo {

/// Values for a model's free parameters plus resource limits.
struct Bounds {
  std::map<std::string, std::int64_t> values;
  std::size_t process_cap = 256;
  /// Search stops (and reports an incomplete result) beyond this many states.
  std::optional<std::size_t> state_cap;
};

enum class MonitorState : std::uint8_t { Open = 0, Closed = 1, Error = 2 };

/// One global state. Terminated processes other than the entry (always at
/// index 0) are dropped; channels no process refers to are dropped and the
/// rest renumbered, so equal behaviour gives equal vectors.
struct StateVector {
  struct Proc {
    std::uint32_t def = 0; // 0 = entry, i = model.procs[i - 1]
    std::uint32_t pc = 0;
    std::vector<std::int32_t> slots;    // channel index per local channel, -1 unset
    std::vector<std::int32_t> counters; // iteration counts of bounded loops
    bool operator==(const Proc &) const = default;
  };
  struct Chan {
    std::int64_t capacity = 0;
    std::int64_t occupancy = 0;
    MonitorState monitor = MonitorState::Open;
    // Index into model.channels; completion channels hold -1 - def of the callee.
    std::int32_t decl = -1;
    bool operator==(const Chan &) const = default;
  };
  std::vector<Proc> procs;
  std::vector<Chan> chans;
  /// Some monitor reached error, possibly on a channel since collected.
  bool error = false;

  bool operator==(const StateVector &) const = default;
  /// Compact byte encoding used for duplicate detection.
  std::string key() const;
  bool has_error() const;
};

struct TraceEvent {
  /// Index of the acting process in the state the step starts from.
  int proc = 0;
  std::string proc_name;
  /// send, recv, close, ack, spawn, choose, loop-enter, loop-exit, terminate
  std::string action;
  std::string channel;
  std::string detail;
  SourceLoc loc;

  bool operator==(const TraceEvent &o) const {
    return proc == o.proc && proc_name == o.proc_name && action == o.action &&
           channel == o.channel && detail == o.detail;
  }
};

/// One atomic step; a rendezvous moves two processes at once.
struct Transition {
  enum class Kind {
    Send,
    Recv,
    Rendezvous,
    Ack,
    Close,
    Choose,
    SelectBranch,
    Spawn,
    LoopStep,
  };
  Kind kind = Kind::Choose;
  int proc = 0;
  int partner = -1;
  /// Branch of `proc` (choice, select case, loop enter/exit); -1 if none.
  int choice = -1;
  /// Select case of `partner` in a rendezvous; -1 if none.
  int partner_choice = -1;
  std::vector<TraceEvent> events;

  bool same_step(const Transition &o) const {
    return kind == o.kind && proc == o.proc && partner == o.partner &&
           choice == o.choice && partner_choice == o.partner_choice;
  }
};

struct Verdict {
  enum class TraceKind { None, ChannelSafety, GlobalDeadlock, Leak };

  bool channel_safe = true;
  bool global_deadlock_free = true;
  bool leaks = false;
  std::size_t states_explored = 0;
  std::vector<TraceEvent> trace;
  TraceKind trace_kind = TraceKind::None;
  bool resource_bound_hit = false;
  /// The search stopped at a violation before covering every state.
  bool aborted = false;

  bool clean() const {
    return channel_safe && global_deadlock_free && !leaks;
  }
};

const char *to_string(Verdict::TraceKind kind);

struct ExploreOptions {
  /// Keep searching after a channel-safety violation.
  bool exhaustive = false;
  /// Stop at the first violation of any kind.
  bool stop_on_first = false;
};

/// Transition system of a model under fixed bounds.
class Checker {
public:
  /// Throws MissingBound if a free parameter has no value.
  Checker(const BehaviouralModel &model, const Bounds &bounds);
  ~Checker();
  Checker(const Checker &) = delete;
  Checker &operator=(const Checker &) = delete;

  StateVector initial_state() const;
  std::vector<Transition> enabled_transitions(const StateVector &s) const;
  /// True when some spawn in `s` is disabled only by the process cap.
  bool spawn_blocked(const StateVector &s) const;
  StateVector apply(const StateVector &s, const Transition &t) const;

  /// Entry finished and no other process left.
  bool is_clean_end(const StateVector &s) const;
  /// Entry finished while another process remains.
  bool entry_done(const StateVector &s) const;

  const BehaviouralModel &model() const;

private:
  friend Verdict explore(const BehaviouralModel &, const Bounds &, ExploreOptions);
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Exhaustive breadth-first search with duplicate elimination.
Verdict explore(const BehaviouralModel &model, const Bounds &bounds,
                ExploreOptions options = {});

std::vector<Transition> enabled_transitions(const BehaviouralModel &model,
                                            const Bounds &bounds,
                                            const StateVector &s);

/// Re-executes `trace` from the initial state. Throws DivergentTrace with
/// the index of the first event that cannot be matched.
StateVector replay_trace(const BehaviouralModel &model, const Bounds &bounds,
                         const std::vector<TraceEvent> &trace);

} // namespace minigo
