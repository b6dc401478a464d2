#include <filesystem>
#include <random>
#include <set>

#include "doctest.h"
#include "minigo/builder.hpp"
#include "minigo/checker.hpp"
#include "minigo/errors.hpp"
#include "minigo/parser.hpp"
#include "invariants.hpp"
#include "oracle.hpp"
#include "random_models.hpp"

using namespace minigo;

namespace {

BehaviouralModel corpus_model(const std::string &file, const std::string &entry) {
  static std::vector<std::unique_ptr<Program>> keep;
  keep.push_back(std::make_unique<Program>(
      parse_file(std::string(MINIGO_CORPUS_DIR) + "/" + file)));
  const Program &p = *keep.back();
  const FuncDecl *d = p.find(entry);
  REQUIRE(d != nullptr);
  return build_model(*d, p);
}

Bounds uniform(const BehaviouralModel &m, std::int64_t v) {
  Bounds b;
  for (const ParamSymbol &s : m.free_params)
    b.values[s.name] = v;
  return b;
}

IRStmt ir(IRStmt::Node n) { return IRStmt{std::move(n), {}}; }

// Entry declaring one channel `c`, plus the given processes.
BehaviouralModel with_channel(std::int64_t cap, bool monitored, IRList entry_rest,
                              std::vector<ProcDef> procs = {}) {
  BehaviouralModel m;
  m.name = "main";
  m.entry.name = "main";
  ChanDecl d;
  d.name = "c";
  d.capacity = ParamRef::literal(cap);
  d.monitored = monitored;
  d.site = "main.c";
  m.channels.push_back(d);
  if (monitored)
    m.monitored.insert("c");
  m.entry.body.push_back(ir(DeclareChan{d}));
  for (IRStmt &s : entry_rest)
    m.entry.body.push_back(std::move(s));
  m.procs = std::move(procs);
  return m;
}

ProcDef async_proc(const std::string &name, IRList body) {
  ProcDef p;
  p.name = name;
  p.callee = name;
  p.chan_params = {"c"};
  p.body = std::move(body);
  return p;
}

StateVector step_until(const Checker &ck, StateVector s, std::size_t steps) {
  for (std::size_t i = 0; i < steps; ++i) {
    auto ts = ck.enabled_transitions(s);
    REQUIRE(ts.size() == 1);
    s = ck.apply(s, ts[0]);
  }
  return s;
}

std::size_t count_kind(const std::vector<Transition> &ts, Transition::Kind k) {
  std::size_t n = 0;
  for (const Transition &t : ts)
    n += t.kind == k;
  return n;
}

} // namespace

TEST_CASE("synchronous channel: one sender and one receiver give one rendezvous") {
  BehaviouralModel m = with_channel(
      0, false, {ir(RunAsync{"go_s", {"c"}}), ir(RecvIn{"c"})},
      {async_proc("go_s", {ir(SendIn{"c"})})});
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 1); // spawn
  auto ts = ck.enabled_transitions(s);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == Transition::Kind::Rendezvous);
  StateVector after = ck.apply(s, ts[0]);
  CHECK(ck.is_clean_end(after));
}

TEST_CASE("closed channel: receive on an empty buffer is enabled") {
  BehaviouralModel m =
      with_channel(0, true, {ir(MonClose{"c"}), ir(RecvIn{"c"}), ir(RecvIn{"c"})});
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 1);
  CHECK(s.chans[0].monitor == MonitorState::Closed);
  auto ts = ck.enabled_transitions(s);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == Transition::Kind::Recv);
  s = step_until(ck, s, 2);
  CHECK(ck.is_clean_end(s));
}

TEST_CASE("closed channel: buffered values are delivered before defaults") {
  BehaviouralModel m = with_channel(
      2, true, {ir(SendIn{"c"}), ir(MonSendAck{"c"}), ir(MonClose{"c"}), ir(RecvIn{"c"})});
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 1);
  CHECK(s.chans[0].occupancy == 1);
  s = step_until(ck, s, 1);
  CHECK(s.chans[0].monitor == MonitorState::Closed);
  CHECK(s.chans[0].occupancy == 1);
  StateVector after = step_until(ck, s, 1);
  CHECK(ck.is_clean_end(after));
  REQUIRE(after.chans.size() == 1);
  CHECK(after.chans[0].occupancy == 0);
}

TEST_CASE("monitor: closing a closed channel reaches error") {
  BehaviouralModel m = with_channel(0, true, {ir(MonClose{"c"}), ir(MonClose{"c"})});
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 1);
  CHECK(s.chans[0].monitor == MonitorState::Closed);
  auto ts = ck.enabled_transitions(s);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == Transition::Kind::Close);
  StateVector e = ck.apply(s, ts[0]);
  CHECK(e.has_error());
  CHECK_FALSE(explore(m, {}).channel_safe);
}

TEST_CASE("monitor: error survives collection of its channel") {
  ChanDecl d;
  d.name = "d";
  d.capacity = ParamRef::literal(0);
  d.monitored = true;
  d.site = "go_p.d";
  ProcDef p;
  p.name = "go_p";
  p.callee = "go_p";
  p.body = {ir(DeclareChan{d}), ir(MonClose{"d"}), ir(MonClose{"d"})};
  BehaviouralModel m;
  m.name = "main";
  m.entry.name = "main";
  m.channels.push_back(d);
  m.monitored.insert("d");
  m.entry.body = {ir(RunAsync{"go_p", {}})};
  m.procs = {p};
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 3);
  // The owner has terminated and the channel is gone.
  CHECK(s.chans.empty());
  CHECK(s.has_error());
  Verdict v = explore(m, {});
  CHECK_FALSE(v.channel_safe);
  CHECK(v.trace_kind == Verdict::TraceKind::ChannelSafety);
}

TEST_CASE("monitor: send acknowledged on a closed channel reaches error") {
  BehaviouralModel m = with_channel(
      1, true, {ir(MonClose{"c"}), ir(SendIn{"c"}), ir(MonSendAck{"c"}), ir(RecvIn{"c"})});
  Verdict v = explore(m, {});
  CHECK_FALSE(v.channel_safe);
  REQUIRE(v.trace.size() >= 2);
  CHECK(v.trace[0].action == "close");
  CHECK(v.trace[1].action == "send");
}

TEST_CASE("buffered send is disabled at capacity") {
  BehaviouralModel m = with_channel(1, false, {ir(SendIn{"c"}), ir(SendIn{"c"})});
  Checker ck(m, {});
  StateVector s = step_until(ck, ck.initial_state(), 1);
  CHECK(ck.enabled_transitions(s).empty());
  Verdict v = explore(m, {});
  CHECK_FALSE(v.global_deadlock_free);
  CHECK(v.trace_kind == Verdict::TraceKind::GlobalDeadlock);
}

TEST_CASE("select: default is always enabled, empty select never") {
  GuardedChoice g;
  g.branches.push_back(GuardedBranch{Comm{false, "c", {}}, {}});
  g.default_branch = IRList{};
  BehaviouralModel m = with_channel(0, false, {ir(g)});
  Checker ck(m, {});
  auto ts = ck.enabled_transitions(ck.initial_state());
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].kind == Transition::Kind::SelectBranch);

  BehaviouralModel empty = with_channel(0, false, {ir(GuardedChoice{})});
  Checker ck2(empty, {});
  CHECK(ck2.enabled_transitions(ck2.initial_state()).empty());
  CHECK_FALSE(explore(empty, {}).global_deadlock_free);
}

TEST_CASE("NDLoop may iterate or leave; BoundedFor follows its counter") {
  BehaviouralModel m = with_channel(0, false, {ir(NDLoop{{ir(Skip{})}})});
  Checker ck(m, {});
  auto ts = ck.enabled_transitions(ck.initial_state());
  CHECK(count_kind(ts, Transition::Kind::LoopStep) == 2);

  BoundedFor f{ParamRef::literal(1), ParamRef::named("n"), {ir(Skip{})}};
  BehaviouralModel loop = with_channel(0, false, {ir(f)});
  loop.free_params.push_back(ParamSymbol{"n", {}, ParamSymbol::Kind::Free, 0,
                                         ParamSymbol::Role::LoopBound, "n"});
  Bounds b;
  b.values["n"] = 4;
  Checker ck2(loop, b);
  StateVector s = ck2.initial_state();
  std::size_t steps = 0;
  while (!ck2.entry_done(s)) {
    auto t = ck2.enabled_transitions(s);
    REQUIRE(t.size() == 1);
    s = ck2.apply(s, t[0]);
    ++steps;
  }
  CHECK(steps == 4); // three iterations and the exit
}

TEST_CASE("spawn is limited by the process cap") {
  ProcDef rec;
  rec.name = "f";
  rec.callee = "f";
  rec.chan_params = {"c"};
  rec.completion_signal = true;
  rec.body = {ir(RunBlocking{"f", {"c"}})};
  BehaviouralModel m = with_channel(0, false, {ir(RunBlocking{"f", {"c"}})}, {rec});
  Bounds b;
  b.process_cap = 5;
  Verdict v = explore(m, b);
  CHECK(v.resource_bound_hit);
  CHECK(v.global_deadlock_free);
}

TEST_CASE("state cap stops the search and is reported") {
  BehaviouralModel m = corpus_model("prod_cons_param.go", "main");
  Bounds b = uniform(m, 2);
  b.state_cap = 10;
  Verdict v = explore(m, b);
  CHECK(v.resource_bound_hit);
  CHECK(v.states_explored <= 10);
}

TEST_CASE("missing bound is an error") {
  BehaviouralModel m = corpus_model("file_processing.go", "main");
  CHECK_THROWS_AS(explore(m, {}), MissingBound);
  try {
    explore(m, {});
  } catch (const MissingBound &e) {
    CHECK(e.symbol() == "len_files_0");
  }
}

TEST_CASE("empty entry has one state and no violations") {
  BehaviouralModel m;
  m.name = "main";
  m.entry.name = "main";
  Verdict v = explore(m, {});
  CHECK(v.states_explored == 1);
  CHECK(v.clean());
  CHECK(v.trace.empty());
}

TEST_CASE("corpus: file processing is clean at 15") {
  BehaviouralModel m = corpus_model("file_processing.go", "main");
  Verdict v = explore(m, uniform(m, 15));
  CHECK(v.channel_safe);
  CHECK(v.global_deadlock_free);
  CHECK_FALSE(v.leaks);
  CHECK_FALSE(v.resource_bound_hit);
}

TEST_CASE("corpus: double close trace ends in two closes on one channel") {
  BehaviouralModel m = corpus_model("double_close.go", "main");
  Verdict v = explore(m, {});
  CHECK_FALSE(v.channel_safe);
  CHECK(v.aborted);
  std::vector<const TraceEvent *> closes;
  for (const TraceEvent &e : v.trace)
    if (e.action == "close")
      closes.push_back(&e);
  REQUIRE(closes.size() == 2);
  CHECK(closes[0]->channel == closes[1]->channel);
  CHECK(closes[0]->proc_name != closes[1]->proc_name);
  StateVector end = replay_trace(m, {}, v.trace);
  CHECK(end.has_error());
}

TEST_CASE("corpus: mismatch main deadlocks, exhaustive mode agrees") {
  BehaviouralModel m = corpus_model("mismatch.go", "main");
  Verdict v = explore(m, {});
  CHECK_FALSE(v.global_deadlock_free);
  ExploreOptions all;
  all.exhaustive = true;
  Verdict w = explore(m, {}, all);
  CHECK(w.global_deadlock_free == v.global_deadlock_free);
  CHECK(w.states_explored == v.states_explored);
}

TEST_CASE("stop on first violation ends the search early") {
  BehaviouralModel m = corpus_model("starvephil.go", "main");
  ExploreOptions first;
  first.stop_on_first = true;
  Verdict a = explore(m, {}, first);
  Verdict b = explore(m, {});
  CHECK_FALSE(a.global_deadlock_free);
  CHECK(a.aborted);
  CHECK(a.states_explored < b.states_explored);
}

TEST_CASE("replay: empty trace gives the initial state; forged event diverges") {
  BehaviouralModel m = corpus_model("mismatch.go", "main");
  Checker ck(m, {});
  CHECK(replay_trace(m, {}, {}) == ck.initial_state());

  Verdict v = explore(m, {});
  REQUIRE_FALSE(v.trace.empty());
  StateVector end = replay_trace(m, {}, v.trace);
  CHECK(ck.enabled_transitions(end).empty());

  std::vector<TraceEvent> forged = v.trace;
  TraceEvent bogus = forged.back();
  bogus.action = "close";
  bogus.channel = "main.nowhere";
  forged.push_back(bogus);
  try {
    replay_trace(m, {}, forged);
    FAIL("expected divergence");
  } catch (const DivergentTrace &e) {
    CHECK(e.step() == v.trace.size());
  }
}

TEST_CASE("explore is deterministic") {
  for (const char *f : {"starvephil.go", "prod_cons_param.go", "philo.go"}) {
    BehaviouralModel m = corpus_model(f, "main");
    Bounds b = uniform(m, 2);
    Verdict a = explore(m, b);
    Verdict c = explore(m, b);
    CHECK(a.states_explored == c.states_explored);
    CHECK(a.clean() == c.clean());
    CHECK(a.trace == c.trace);
  }
}

TEST_CASE("random models: verdict flags match the brute-force enumerator") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 400; ++i) {
    BehaviouralModel m = gen::random_model(rng);
    CAPTURE(to_text(m));
    oracle::Flags o = oracle::enumerate(m);
    ExploreOptions all;
    all.exhaustive = true;
    Verdict v = explore(m, {}, all);
    CHECK(v.channel_safe == o.channel_safe);
    CHECK(v.global_deadlock_free == o.global_deadlock_free);
    CHECK(v.leaks == o.leaks);
    CHECK_FALSE(v.resource_bound_hit);
    Verdict d = explore(m, {});
    CHECK(d.channel_safe == o.channel_safe);
    if (!v.trace.empty())
      CHECK_NOTHROW(replay_trace(m, {}, v.trace));
  }
}

namespace {

std::string site_of(const BehaviouralModel &m, const StateVector::Chan &c) {
  return c.decl >= 0 ? m.channels[static_cast<std::size_t>(c.decl)].site : "";
}

} // namespace

TEST_CASE("random walks: buffers are conserved and monitors track closes") {
  std::mt19937 rng(99);
  for (int i = 0; i < 300; ++i) {
    BehaviouralModel m = gen::random_model(rng, false);
    CAPTURE(to_text(m));
    Checker ck(m, {});
    for (int walk = 0; walk < 5; ++walk) {
      StateVector s = ck.initial_state();
      std::map<std::string, std::int64_t> balance;
      std::set<std::string> closed;
      for (int step = 0; step < 40; ++step) {
        auto ts = ck.enabled_transitions(s);
        if (ts.empty() || s.has_error())
          break;
        const Transition &t = ts[rng() % ts.size()];
        bool expect_error = false;
        // Occupancy changes only through buffered operations.
        std::map<std::string, std::int64_t> before;
        for (const StateVector::Chan &c : s.chans)
          before[site_of(m, c)] = c.occupancy;
        for (const TraceEvent &e : t.events) {
          bool was_closed = closed.count(e.channel) > 0;
          if (e.action == "close") {
            expect_error = expect_error || was_closed;
            closed.insert(e.channel);
          } else if ((e.action == "send" && e.detail == "acknowledged") ||
                     e.action == "ack") {
            expect_error = expect_error || was_closed;
          }
          if (t.kind == Transition::Kind::Send && e.action == "send" && !was_closed)
            ++balance[e.channel];
          if (t.kind == Transition::Kind::Recv && e.action == "recv" &&
              before[e.channel] > 0)
            --balance[e.channel];
        }
        s = ck.apply(s, t);
        CHECK(s.has_error() == expect_error);
        for (const StateVector::Chan &c : s.chans) {
          CHECK(c.occupancy >= 0);
          CHECK(c.occupancy <= c.capacity);
          if (c.decl >= 0)
            CHECK(c.occupancy == balance[site_of(m, c)]);
        }
      }
    }
  }
}

TEST_CASE("corpus: monitor errors arise exactly from a use after close") {
  for (const auto &e : std::filesystem::directory_iterator(MINIGO_CORPUS_DIR)) {
    if (e.path().extension() != ".go")
      continue;
    Program p = parse_file(e.path().string());
    for (const FuncDecl *entry : partition_program(p)) {
      CAPTURE(e.path().string());
      CAPTURE(entry->name);
      BehaviouralModel m = build_model(*entry, p);
      Bounds b = uniform(m, 2);
      inv::MonitorCheck mc = inv::check_monitor(m, b);
      for (const std::string &f : mc.failures)
        MESSAGE(f);
      CHECK(mc.failures.empty());
      Verdict v = explore(m, b);
      CHECK(v.channel_safe == (mc.error_edges == 0));
      if (!v.channel_safe) {
        CHECK(inv::close_then_use(v.trace));
        CHECK(replay_trace(m, b, v.trace).has_error());
      }
    }
  }
}
