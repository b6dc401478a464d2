#include "minigo/checker.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

#include "minigo/errors.hpp"

namespace minigo {

const char *to_string(Verdict::TraceKind kind) {
  switch (kind) {
  case Verdict::TraceKind::None:
    return "none";
  case Verdict::TraceKind::ChannelSafety:
    return "channel-safety";
  case Verdict::TraceKind::GlobalDeadlock:
    return "global-deadlock";
  case Verdict::TraceKind::Leak:
    return "leak";
  }
  return "none";
}

namespace {

void put(std::string &out, std::int64_t v) {
  char buf[sizeof v];
  std::memcpy(buf, &v, sizeof v);
  out.append(buf, sizeof v);
}

} // namespace

std::string StateVector::key() const {
  std::string out;
  put(out, static_cast<std::int64_t>(procs.size()));
  for (const Proc &p : procs) {
    put(out, p.def);
    put(out, p.pc);
    for (std::int32_t s : p.slots)
      put(out, s);
    for (std::int32_t c : p.counters)
      put(out, c);
  }
  put(out, error);
  put(out, static_cast<std::int64_t>(chans.size()));
  for (const Chan &c : chans) {
    put(out, c.capacity);
    put(out, c.occupancy);
    put(out, static_cast<std::int64_t>(c.monitor));
    put(out, c.decl);
  }
  return out;
}

bool StateVector::has_error() const {
  return error || std::any_of(chans.begin(), chans.end(), [](const Chan &c) {
    return c.monitor == MonitorState::Error;
  });
}

namespace {

enum class Op {
  Send,
  Recv,
  Ack,
  Close,
  Choose,
  Select,
  Spawn,
  Call,
  Wait,
  ForHead,
  NDHead,
  ForeverHead,
  Jump,
  MakeChan,
  End,
};

struct Case {
  bool is_send = false;
  int slot = -1;
  bool fused = false;
  int target = -1;
  SourceLoc loc;
};

struct Instr {
  Op op = Op::End;
  int slot = -1;
  bool fused = false;
  int target = -1;
  std::vector<int> targets;
  std::vector<Case> cases;
  int default_target = -1;
  int proc = -1;
  std::vector<int> args;
  int counter = -1;
  std::int64_t iterations = 0;
  std::vector<int> resets;
  std::int64_t capacity = 0;
  int decl = -1;
  SourceLoc loc;
};

struct Compiled {
  std::string name;
  std::vector<Instr> code;
  std::vector<std::string> slot_names;
  int ncounters = 0;
  int done_slot = -1;
  int call_slot = -1;
};

struct Loop {
  std::vector<int> breaks;
  int counter = -1;
};

class Compiler {
public:
  Compiler(const BehaviouralModel &m, const Bounds &b,
           const std::map<std::string, int> &proc_index)
      : m_(m), b_(b), proc_index_(proc_index) {}

  Compiled compile(const ProcDef &def) {
    out_ = Compiled{};
    out_.name = def.name;
    for (const std::string &p : def.chan_params)
      slot_of(p);
    if (def.completion_signal) {
      out_.done_slot = static_cast<int>(out_.slot_names.size());
      out_.slot_names.push_back("<done>");
    }
    bool calls = false;
    walk_ir(def.body, [&](const IRStmt &s) {
      if (s.as<RunBlocking>())
        calls = true;
    });
    if (calls) {
      out_.call_slot = static_cast<int>(out_.slot_names.size());
      out_.slot_names.push_back("<call>");
    }
    loops_.clear();
    returns_.clear();
    list(def.body);
    int epilogue = here();
    for (int r : returns_)
      out_.code[r].target = epilogue;
    if (def.completion_signal) {
      Instr send;
      send.op = Op::Send;
      send.slot = out_.done_slot;
      send.loc = def.loc;
      emit(std::move(send));
    }
    Instr end;
    end.op = Op::End;
    end.loc = def.loc;
    emit(std::move(end));
    return std::move(out_);
  }

private:
  int here() const { return static_cast<int>(out_.code.size()); }
  int emit(Instr i) {
    out_.code.push_back(std::move(i));
    return here() - 1;
  }

  int slot_of(const std::string &name) {
    for (std::size_t i = 0; i < out_.slot_names.size(); ++i)
      if (out_.slot_names[i] == name)
        return static_cast<int>(i);
    out_.slot_names.push_back(name);
    return static_cast<int>(out_.slot_names.size()) - 1;
  }

  int existing_slot(const std::string &name, const SourceLoc &loc) {
    for (std::size_t i = 0; i < out_.slot_names.size(); ++i)
      if (out_.slot_names[i] == name)
        return static_cast<int>(i);
    throw Error(loc.str() + ": channel '" + name + "' used before creation in " +
                out_.name);
  }

  std::int64_t value(const ParamRef &r) const {
    if (r.is_literal)
      return r.value;
    auto it = b_.values.find(r.symbol);
    if (it == b_.values.end())
      throw MissingBound(r.symbol);
    return it->second;
  }

  int proc_id(const std::string &name, const SourceLoc &loc) const {
    auto it = proc_index_.find(name);
    if (it == proc_index_.end())
      throw Error(loc.str() + ": no process '" + name + "' in model");
    return it->second;
  }

  int decl_index(const ChanDecl &d) const {
    for (std::size_t i = 0; i < m_.channels.size(); ++i) {
      const ChanDecl &c = m_.channels[i];
      if (c.site == d.site && c.loc.line == d.loc.line &&
          c.loc.column == d.loc.column)
        return static_cast<int>(i);
    }
    for (std::size_t i = 0; i < m_.channels.size(); ++i)
      if (m_.channels[i].site == d.site)
        return static_cast<int>(i);
    return -1;
  }

  // Compiles `body`, ending with a jump to a label patched by the caller.
  int branch(const IRList &body, std::size_t skip) {
    IRList rest(body.begin() + static_cast<std::ptrdiff_t>(skip), body.end());
    list(rest);
    Instr j;
    j.op = Op::Jump;
    return emit(std::move(j));
  }

  void list(const IRList &body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      const IRStmt &s = body[i];
      if (auto *n = s.as<SendIn>()) {
        Instr in;
        in.op = Op::Send;
        in.slot = existing_slot(n->chan, s.loc);
        in.loc = s.loc;
        if (i + 1 < body.size()) {
          auto *ack = body[i + 1].as<MonSendAck>();
          if (ack && ack->chan == n->chan) {
            in.fused = true;
            ++i;
          }
        }
        emit(std::move(in));
      } else if (auto *n = s.as<RecvIn>()) {
        Instr in;
        in.op = Op::Recv;
        in.slot = existing_slot(n->chan, s.loc);
        in.loc = s.loc;
        emit(std::move(in));
      } else if (auto *n = s.as<MonSendAck>()) {
        Instr in;
        in.op = Op::Ack;
        in.slot = existing_slot(n->chan, s.loc);
        in.loc = s.loc;
        emit(std::move(in));
      } else if (auto *n = s.as<MonClose>()) {
        Instr in;
        in.op = Op::Close;
        in.slot = existing_slot(n->chan, s.loc);
        in.loc = s.loc;
        emit(std::move(in));
      } else if (auto *n = s.as<NDChoice>()) {
        Instr in;
        in.op = Op::Choose;
        in.loc = s.loc;
        int at = emit(std::move(in));
        std::vector<int> jumps;
        for (const IRList &b : n->branches) {
          out_.code[at].targets.push_back(here());
          jumps.push_back(branch(b, 0));
        }
        for (int j : jumps)
          out_.code[j].target = here();
      } else if (auto *n = s.as<GuardedChoice>()) {
        Instr in;
        in.op = Op::Select;
        in.loc = s.loc;
        int at = emit(std::move(in));
        std::vector<int> jumps;
        for (const GuardedBranch &b : n->branches) {
          Case c;
          c.is_send = b.guard.is_send;
          c.slot = existing_slot(b.guard.chan, b.guard.loc);
          c.loc = b.guard.loc;
          std::size_t skip = 0;
          if (c.is_send && !b.cont.empty()) {
            auto *ack = b.cont.front().as<MonSendAck>();
            if (ack && ack->chan == b.guard.chan) {
              c.fused = true;
              skip = 1;
            }
          }
          c.target = here();
          out_.code[at].cases.push_back(c);
          jumps.push_back(branch(b.cont, skip));
        }
        if (n->default_branch) {
          out_.code[at].default_target = here();
          jumps.push_back(branch(*n->default_branch, 0));
        }
        for (int j : jumps)
          out_.code[j].target = here();
      } else if (auto *n = s.as<RunBlocking>()) {
        Instr in;
        in.op = Op::Call;
        in.proc = proc_id(n->proc, s.loc);
        for (const std::string &a : n->args)
          in.args.push_back(existing_slot(a, s.loc));
        in.slot = out_.call_slot;
        in.loc = s.loc;
        emit(std::move(in));
        Instr w;
        w.op = Op::Wait;
        w.slot = out_.call_slot;
        w.loc = s.loc;
        emit(std::move(w));
      } else if (auto *n = s.as<RunAsync>()) {
        Instr in;
        in.op = Op::Spawn;
        in.proc = proc_id(n->proc, s.loc);
        for (const std::string &a : n->args)
          in.args.push_back(existing_slot(a, s.loc));
        in.loc = s.loc;
        emit(std::move(in));
      } else if (auto *n = s.as<BoundedFor>()) {
        Instr in;
        in.op = Op::ForHead;
        in.counter = out_.ncounters++;
        in.iterations = std::max<std::int64_t>(0, value(n->to) - value(n->from));
        in.loc = s.loc;
        int head = emit(std::move(in));
        loop_body(head, n->body, out_.code[head].counter);
      } else if (auto *n = s.as<NDLoop>()) {
        Instr in;
        in.op = Op::NDHead;
        in.loc = s.loc;
        int head = emit(std::move(in));
        loop_body(head, n->body, -1);
      } else if (auto *n = s.as<ForeverLoop>()) {
        Instr in;
        in.op = Op::ForeverHead;
        in.loc = s.loc;
        int head = emit(std::move(in));
        loop_body(head, n->body, -1);
      } else if (auto *n = s.as<DeclareChan>()) {
        Instr in;
        in.op = Op::MakeChan;
        in.slot = slot_of(n->decl.name);
        in.capacity = value(n->decl.capacity);
        if (in.capacity < 0)
          throw Error(s.loc.str() + ": negative capacity " +
                      std::to_string(in.capacity) + " for channel '" +
                      n->decl.name + "'");
        in.decl = decl_index(n->decl);
        in.loc = s.loc;
        emit(std::move(in));
      } else if (s.as<BreakLoop>()) {
        if (loops_.empty())
          throw Error(s.loc.str() + ": break outside a loop");
        Instr in;
        in.op = Op::Jump;
        if (loops_.back().counter >= 0)
          in.resets.push_back(loops_.back().counter);
        in.loc = s.loc;
        loops_.back().breaks.push_back(emit(std::move(in)));
      } else if (s.as<ReturnProc>()) {
        Instr in;
        in.op = Op::Jump;
        for (const Loop &l : loops_)
          if (l.counter >= 0)
            in.resets.push_back(l.counter);
        in.loc = s.loc;
        returns_.push_back(emit(std::move(in)));
      }
      // Skip compiles to nothing.
    }
  }

  void loop_body(int head, const IRList &body, int counter) {
    loops_.push_back(Loop{{}, counter});
    list(body);
    Instr back;
    back.op = Op::Jump;
    back.target = head;
    back.loc = out_.code[head].loc;
    emit(std::move(back));
    int exit = here();
    out_.code[head].target = exit;
    for (int b : loops_.back().breaks)
      out_.code[b].target = exit;
    loops_.pop_back();
  }

  const BehaviouralModel &m_;
  const Bounds &b_;
  const std::map<std::string, int> &proc_index_;
  Compiled out_;
  std::vector<Loop> loops_;
  std::vector<int> returns_;
};

using Succ = std::pair<Transition, StateVector>;

} // namespace

struct Checker::Impl {
  const BehaviouralModel &model;
  Bounds bounds;
  std::vector<Compiled> procs;

  Impl(const BehaviouralModel &m, const Bounds &b) : model(m), bounds(b) {
    for (const ParamSymbol &p : m.free_params) {
      auto it = b.values.find(p.name);
      if (it == b.values.end())
        throw MissingBound(p.name);
      if (it->second < 0)
        throw Error("bound for '" + p.name + "' is negative");
    }
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < m.procs.size(); ++i)
      index.emplace(m.procs[i].name, static_cast<int>(i) + 1);
    Compiler c(m, bounds, index);
    procs.push_back(c.compile(m.entry));
    for (const ProcDef &p : m.procs)
      procs.push_back(c.compile(p));
  }

  const Instr &at(const StateVector::Proc &p) const {
    return procs[p.def].code[p.pc];
  }

  std::string chan_name(const StateVector &s, int chan) const {
    if (chan < 0)
      return "";
    std::int32_t d = s.chans[static_cast<std::size_t>(chan)].decl;
    if (d >= 0)
      return model.channels[static_cast<std::size_t>(d)].site;
    return procs[static_cast<std::size_t>(-1 - d)].name + ".done";
  }

  TraceEvent event(const StateVector &s, int p, const char *action, int chan,
                   std::string detail, const SourceLoc &loc) const {
    TraceEvent e;
    e.proc = p;
    e.proc_name = procs[s.procs[static_cast<std::size_t>(p)].def].name;
    e.action = action;
    e.channel = chan_name(s, chan);
    e.detail = std::move(detail);
    e.loc = loc;
    return e;
  }

  StateVector::Proc fresh_proc(int def) const {
    StateVector::Proc p;
    p.def = static_cast<std::uint32_t>(def);
    p.slots.assign(procs[static_cast<std::size_t>(def)].slot_names.size(), -1);
    p.counters.assign(
        static_cast<std::size_t>(procs[static_cast<std::size_t>(def)].ncounters),
        0);
    return p;
  }

  // Runs jumps and channel creations until a visible instruction.
  void settle(StateVector &s, std::size_t p) const {
    for (;;) {
      StateVector::Proc &pr = s.procs[p];
      const Instr &in = procs[pr.def].code[pr.pc];
      if (in.op == Op::Jump) {
        for (int c : in.resets)
          pr.counters[static_cast<std::size_t>(c)] = 0;
        pr.pc = static_cast<std::uint32_t>(in.target);
      } else if (in.op == Op::MakeChan) {
        StateVector::Chan ch;
        ch.capacity = in.capacity;
        ch.decl = in.decl;
        s.chans.push_back(ch);
        pr.slots[static_cast<std::size_t>(in.slot)] =
            static_cast<std::int32_t>(s.chans.size()) - 1;
        ++pr.pc;
      } else {
        return;
      }
    }
  }

  void move_to(StateVector &s, Transition &t, int p, int pc) const {
    s.procs[static_cast<std::size_t>(p)].pc = static_cast<std::uint32_t>(pc);
    settle(s, static_cast<std::size_t>(p));
    const StateVector::Proc &pr = s.procs[static_cast<std::size_t>(p)];
    if (at(pr).op == Op::End)
      t.events.push_back(event(s, p, "terminate", -1, "", at(pr).loc));
  }

  void canonicalize(StateVector &s) const {
    std::vector<StateVector::Proc> live;
    live.reserve(s.procs.size());
    for (std::size_t i = 0; i < s.procs.size(); ++i)
      if (i == 0 || at(s.procs[i]).op != Op::End)
        live.push_back(std::move(s.procs[i]));
    s.procs = std::move(live);

    // Order non-entry processes by a key that does not depend on channel
    // numbering, so permutations of interchangeable processes coincide.
    auto sort_key = [&](const StateVector::Proc &p) {
      std::vector<std::int64_t> k{p.def, p.pc};
      k.insert(k.end(), p.counters.begin(), p.counters.end());
      for (std::int32_t c : p.slots) {
        if (c < 0) {
          k.push_back(-1);
          continue;
        }
        const StateVector::Chan &ch = s.chans[static_cast<std::size_t>(c)];
        k.insert(k.end(), {ch.capacity, ch.occupancy,
                           static_cast<std::int64_t>(ch.monitor), ch.decl});
      }
      return k;
    };
    if (s.procs.size() > 2) {
      std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> keys;
      for (std::size_t i = 1; i < s.procs.size(); ++i)
        keys.emplace_back(sort_key(s.procs[i]), i);
      std::stable_sort(keys.begin(), keys.end(), [](const auto &a, const auto &b) {
        return a.first < b.first;
      });
      std::vector<StateVector::Proc> sorted;
      sorted.reserve(s.procs.size());
      sorted.push_back(std::move(s.procs[0]));
      for (auto &k : keys)
        sorted.push_back(std::move(s.procs[k.second]));
      s.procs = std::move(sorted);
    }

    std::vector<std::int32_t> renum(s.chans.size(), -1);
    std::vector<StateVector::Chan> chans;
    for (StateVector::Proc &p : s.procs)
      for (std::int32_t &c : p.slots) {
        if (c < 0)
          continue;
        auto &r = renum[static_cast<std::size_t>(c)];
        if (r < 0) {
          r = static_cast<std::int32_t>(chans.size());
          chans.push_back(s.chans[static_cast<std::size_t>(c)]);
        }
        c = r;
      }
    for (std::size_t c = 0; c < s.chans.size(); ++c)
      if (renum[c] < 0 && s.chans[c].monitor == MonitorState::Error)
        s.error = true;
    s.chans = std::move(chans);
  }

  // Receivers ready for a rendezvous on channel `c`: (proc, case or -1).
  std::vector<std::pair<int, int>> receivers(const StateVector &s, int sender,
                                             std::int32_t c) const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t q = 0; q < s.procs.size(); ++q) {
      if (static_cast<int>(q) == sender)
        continue;
      const StateVector::Proc &pr = s.procs[q];
      const Instr &in = at(pr);
      if ((in.op == Op::Recv || in.op == Op::Wait) &&
          pr.slots[static_cast<std::size_t>(in.slot)] == c)
        out.emplace_back(static_cast<int>(q), -1);
      else if (in.op == Op::Select)
        for (std::size_t k = 0; k < in.cases.size(); ++k)
          if (!in.cases[k].is_send &&
              pr.slots[static_cast<std::size_t>(in.cases[k].slot)] == c)
            out.emplace_back(static_cast<int>(q), static_cast<int>(k));
    }
    return out;
  }

  // Send by `p` (plain or select case `k`) on channel `c`.
  void sends(const StateVector &s, int p, int k, int slot, bool fused,
             int target, const SourceLoc &loc, std::vector<Succ> &out) const {
    const StateVector::Proc &pr = s.procs[static_cast<std::size_t>(p)];
    std::int32_t c = pr.slots[static_cast<std::size_t>(slot)];
    if (c < 0)
      return;
    const StateVector::Chan &ch = s.chans[static_cast<std::size_t>(c)];
    const std::string detail = fused ? "acknowledged" : "";
    if (ch.monitor != MonitorState::Open || ch.capacity > 0) {
      if (ch.monitor == MonitorState::Open && ch.occupancy >= ch.capacity)
        return;
      Succ r;
      r.first.kind = Transition::Kind::Send;
      r.first.proc = p;
      r.first.choice = k;
      r.first.events.push_back(event(s, p, "send", c, detail, loc));
      r.second = s;
      StateVector::Chan &nc = r.second.chans[static_cast<std::size_t>(c)];
      if (nc.monitor == MonitorState::Open)
        ++nc.occupancy;
      else if (fused)
        nc.monitor = MonitorState::Error;
      move_to(r.second, r.first, p, target);
      out.push_back(std::move(r));
      return;
    }
    for (auto [q, qk] : receivers(s, p, c)) {
      const StateVector::Proc &qp = s.procs[static_cast<std::size_t>(q)];
      const Instr &qin = at(qp);
      Succ r;
      r.first.kind = Transition::Kind::Rendezvous;
      r.first.proc = p;
      r.first.partner = q;
      r.first.choice = k;
      r.first.partner_choice = qk;
      r.first.events.push_back(event(s, p, "send", c, detail, loc));
      r.first.events.push_back(event(
          s, q, "recv", c, "", qk < 0 ? qin.loc : qin.cases[static_cast<std::size_t>(qk)].loc));
      r.second = s;
      int qtarget = qk < 0 ? static_cast<int>(qp.pc) + 1
                           : qin.cases[static_cast<std::size_t>(qk)].target;
      if (qin.op == Op::Wait)
        r.second.procs[static_cast<std::size_t>(q)]
            .slots[static_cast<std::size_t>(qin.slot)] = -1;
      move_to(r.second, r.first, p, target);
      move_to(r.second, r.first, q, qtarget);
      out.push_back(std::move(r));
    }
  }

  // Receive by `p` that does not need a partner.
  void recv_alone(const StateVector &s, int p, int k, int slot, int target,
                  const SourceLoc &loc, bool clear_slot,
                  std::vector<Succ> &out) const {
    const StateVector::Proc &pr = s.procs[static_cast<std::size_t>(p)];
    std::int32_t c = pr.slots[static_cast<std::size_t>(slot)];
    if (c < 0)
      return;
    const StateVector::Chan &ch = s.chans[static_cast<std::size_t>(c)];
    bool closed = ch.monitor != MonitorState::Open;
    if (ch.occupancy == 0 && !closed)
      return;
    Succ r;
    r.first.kind = Transition::Kind::Recv;
    r.first.proc = p;
    r.first.choice = k;
    r.first.events.push_back(
        event(s, p, "recv", c, ch.occupancy == 0 ? "closed" : "", loc));
    r.second = s;
    StateVector::Chan &nc = r.second.chans[static_cast<std::size_t>(c)];
    if (nc.occupancy > 0)
      --nc.occupancy;
    if (clear_slot)
      r.second.procs[static_cast<std::size_t>(p)]
          .slots[static_cast<std::size_t>(slot)] = -1;
    move_to(r.second, r.first, p, target);
    out.push_back(std::move(r));
  }

  bool can_spawn(const StateVector &s) const {
    return s.procs.size() < bounds.process_cap;
  }

  void successors(const StateVector &s, std::vector<Succ> &out,
                  bool &blocked) const {
    blocked = false;
    for (std::size_t pi = 0; pi < s.procs.size(); ++pi) {
      const int p = static_cast<int>(pi);
      const StateVector::Proc &pr = s.procs[pi];
      const Instr &in = at(pr);
      const int next = static_cast<int>(pr.pc) + 1;
      switch (in.op) {
      case Op::Send:
        sends(s, p, -1, in.slot, in.fused, next, in.loc, out);
        break;
      case Op::Recv:
        recv_alone(s, p, -1, in.slot, next, in.loc, false, out);
        break;
      case Op::Wait:
        recv_alone(s, p, -1, in.slot, next, in.loc, true, out);
        break;
      case Op::Ack:
      case Op::Close: {
        std::int32_t c = pr.slots[static_cast<std::size_t>(in.slot)];
        if (c < 0)
          break;
        Succ r;
        bool close = in.op == Op::Close;
        r.first.kind = close ? Transition::Kind::Close : Transition::Kind::Ack;
        r.first.proc = p;
        r.first.events.push_back(event(s, p, close ? "close" : "ack", c, "", in.loc));
        r.second = s;
        StateVector::Chan &nc = r.second.chans[static_cast<std::size_t>(c)];
        if (nc.monitor == MonitorState::Closed)
          nc.monitor = MonitorState::Error;
        else if (close && nc.monitor == MonitorState::Open)
          nc.monitor = MonitorState::Closed;
        move_to(r.second, r.first, p, next);
        out.push_back(std::move(r));
        break;
      }
      case Op::Choose:
        for (std::size_t k = 0; k < in.targets.size(); ++k) {
          Succ r;
          r.first.kind = Transition::Kind::Choose;
          r.first.proc = p;
          r.first.choice = static_cast<int>(k);
          r.first.events.push_back(
              event(s, p, "choose", -1, "branch " + std::to_string(k), in.loc));
          r.second = s;
          move_to(r.second, r.first, p, in.targets[k]);
          out.push_back(std::move(r));
        }
        break;
      case Op::Select:
        for (std::size_t k = 0; k < in.cases.size(); ++k) {
          const Case &c = in.cases[k];
          if (c.is_send)
            sends(s, p, static_cast<int>(k), c.slot, c.fused, c.target, c.loc, out);
          else
            recv_alone(s, p, static_cast<int>(k), c.slot, c.target, c.loc, false,
                       out);
        }
        if (in.default_target >= 0) {
          Succ r;
          r.first.kind = Transition::Kind::SelectBranch;
          r.first.proc = p;
          r.first.choice = static_cast<int>(in.cases.size());
          r.first.events.push_back(event(s, p, "choose", -1, "default", in.loc));
          r.second = s;
          move_to(r.second, r.first, p, in.default_target);
          out.push_back(std::move(r));
        }
        break;
      case Op::Spawn:
      case Op::Call: {
        if (!can_spawn(s)) {
          blocked = true;
          break;
        }
        Succ r;
        r.first.kind = Transition::Kind::Spawn;
        r.first.proc = p;
        r.first.events.push_back(event(
            s, p, "spawn", -1, procs[static_cast<std::size_t>(in.proc)].name, in.loc));
        r.second = s;
        StateVector::Proc child = fresh_proc(in.proc);
        for (std::size_t a = 0; a < in.args.size(); ++a)
          child.slots[a] = pr.slots[static_cast<std::size_t>(in.args[a])];
        if (in.op == Op::Call) {
          StateVector::Chan done;
          done.decl = -1 - in.proc;
          r.second.chans.push_back(done);
          auto id = static_cast<std::int32_t>(r.second.chans.size()) - 1;
          child.slots[static_cast<std::size_t>(
              procs[static_cast<std::size_t>(in.proc)].done_slot)] = id;
          r.second.procs[pi].slots[static_cast<std::size_t>(in.slot)] = id;
        }
        r.second.procs.push_back(std::move(child));
        int cid = static_cast<int>(r.second.procs.size()) - 1;
        move_to(r.second, r.first, p, next);
        move_to(r.second, r.first, cid, 0);
        out.push_back(std::move(r));
        break;
      }
      case Op::ForHead: {
        Succ r;
        r.first.kind = Transition::Kind::LoopStep;
        r.first.proc = p;
        r.second = s;
        std::int32_t &cnt =
            r.second.procs[pi].counters[static_cast<std::size_t>(in.counter)];
        if (cnt < in.iterations) {
          r.first.choice = 0;
          r.first.events.push_back(event(s, p, "loop-enter", -1,
                                         "iteration " + std::to_string(cnt + 1),
                                         in.loc));
          ++cnt;
          move_to(r.second, r.first, p, next);
        } else {
          r.first.choice = 1;
          r.first.events.push_back(event(s, p, "loop-exit", -1, "", in.loc));
          cnt = 0;
          move_to(r.second, r.first, p, in.target);
        }
        out.push_back(std::move(r));
        break;
      }
      case Op::NDHead:
      case Op::ForeverHead:
        for (int k = 0; k < (in.op == Op::NDHead ? 2 : 1); ++k) {
          Succ r;
          r.first.kind = Transition::Kind::LoopStep;
          r.first.proc = p;
          r.first.choice = k;
          r.first.events.push_back(
              event(s, p, k == 0 ? "loop-enter" : "loop-exit", -1, "", in.loc));
          r.second = s;
          move_to(r.second, r.first, p, k == 0 ? next : in.target);
          out.push_back(std::move(r));
        }
        break;
      case Op::Jump:
      case Op::MakeChan:
      case Op::End:
        break;
      }
    }
    for (Succ &r : out)
      canonicalize(r.second);
  }
};

Checker::Checker(const BehaviouralModel &model, const Bounds &bounds)
    : impl_(std::make_unique<Impl>(model, bounds)) {}

Checker::~Checker() = default;

const BehaviouralModel &Checker::model() const { return impl_->model; }

StateVector Checker::initial_state() const {
  StateVector s;
  s.procs.push_back(impl_->fresh_proc(0));
  impl_->settle(s, 0);
  impl_->canonicalize(s);
  return s;
}

std::vector<Transition> Checker::enabled_transitions(const StateVector &s) const {
  std::vector<Succ> succ;
  bool blocked = false;
  impl_->successors(s, succ, blocked);
  std::vector<Transition> out;
  out.reserve(succ.size());
  for (Succ &r : succ)
    out.push_back(std::move(r.first));
  return out;
}

bool Checker::spawn_blocked(const StateVector &s) const {
  if (impl_->can_spawn(s))
    return false;
  for (const StateVector::Proc &p : s.procs) {
    Op op = impl_->at(p).op;
    if (op == Op::Spawn || op == Op::Call)
      return true;
  }
  return false;
}

StateVector Checker::apply(const StateVector &s, const Transition &t) const {
  std::vector<Succ> succ;
  bool blocked = false;
  impl_->successors(s, succ, blocked);
  for (Succ &r : succ)
    if (r.first.same_step(t))
      return std::move(r.second);
  throw Error("transition is not enabled in this state");
}

bool Checker::entry_done(const StateVector &s) const {
  return impl_->at(s.procs.front()).op == Op::End;
}

bool Checker::is_clean_end(const StateVector &s) const {
  return entry_done(s) && s.procs.size() == 1;
}

Verdict explore(const BehaviouralModel &model, const Bounds &bounds,
                ExploreOptions options) {
  Checker checker(model, bounds);
  const Checker::Impl &impl = *checker.impl_;
  Verdict v;

  struct Node {
    std::size_t parent;
    std::vector<TraceEvent> events;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::pair<StateVector, std::size_t>> queue;

  auto trace_to = [&](std::size_t n) {
    std::vector<std::vector<TraceEvent> *> steps;
    for (std::size_t i = n; i != 0; i = nodes[i].parent)
      steps.push_back(&nodes[i].events);
    std::vector<TraceEvent> out;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it)
      out.insert(out.end(), (*it)->begin(), (*it)->end());
    return out;
  };
  auto record = [&](Verdict::TraceKind kind, std::size_t n) {
    bool replace = v.trace_kind == Verdict::TraceKind::None ||
                   (kind == Verdict::TraceKind::ChannelSafety &&
                    v.trace_kind != Verdict::TraceKind::ChannelSafety);
    if (replace) {
      v.trace = trace_to(n);
      v.trace_kind = kind;
    }
  };

  StateVector init = checker.initial_state();
  seen.emplace(init.key(), 0);
  nodes.push_back(Node{0, {}});
  queue.emplace_back(std::move(init), 0);

  std::vector<Succ> succ;
  bool stop = false;
  while (!queue.empty() && !stop) {
    auto [s, n] = std::move(queue.front());
    queue.pop_front();
    succ.clear();
    bool blocked = false;
    impl.successors(s, succ, blocked);
    if (blocked)
      v.resource_bound_hit = true;
    if (succ.empty() && !blocked) {
      Verdict::TraceKind kind = Verdict::TraceKind::None;
      if (!checker.entry_done(s)) {
        v.global_deadlock_free = false;
        kind = Verdict::TraceKind::GlobalDeadlock;
      } else if (s.procs.size() > 1) {
        v.leaks = true;
        kind = Verdict::TraceKind::Leak;
      }
      if (kind != Verdict::TraceKind::None) {
        record(kind, n);
        if (options.stop_on_first) {
          v.aborted = true;
          break;
        }
      }
    }
    for (Succ &r : succ) {
      std::string key = r.second.key();
      if (seen.count(key))
        continue;
      if (bounds.state_cap && nodes.size() >= *bounds.state_cap) {
        v.resource_bound_hit = true;
        stop = true;
        break;
      }
      std::size_t id = nodes.size();
      seen.emplace(std::move(key), id);
      nodes.push_back(Node{n, std::move(r.first.events)});
      if (r.second.has_error()) {
        v.channel_safe = false;
        record(Verdict::TraceKind::ChannelSafety, id);
        if (!options.exhaustive || options.stop_on_first) {
          v.aborted = true;
          stop = true;
          break;
        }
        continue;
      }
      queue.emplace_back(std::move(r.second), id);
    }
  }
  v.states_explored = nodes.size();
  return v;
}

std::vector<Transition> enabled_transitions(const BehaviouralModel &model,
                                            const Bounds &bounds,
                                            const StateVector &s) {
  return Checker(model, bounds).enabled_transitions(s);
}

StateVector replay_trace(const BehaviouralModel &model, const Bounds &bounds,
                         const std::vector<TraceEvent> &trace) {
  Checker checker(model, bounds);
  StateVector s = checker.initial_state();
  std::size_t i = 0;
  while (i < trace.size()) {
    const Transition *match = nullptr;
    std::vector<Transition> ts = checker.enabled_transitions(s);
    for (const Transition &t : ts) {
      if (t.events.empty() || i + t.events.size() > trace.size())
        continue;
      if (std::equal(t.events.begin(), t.events.end(),
                     trace.begin() + static_cast<std::ptrdiff_t>(i))) {
        match = &t;
        break;
      }
    }
    if (!match)
      throw DivergentTrace(i);
    s = checker.apply(s, *match);
    i += match->events.size();
  }
  return s;
}

} // namespace minigo
