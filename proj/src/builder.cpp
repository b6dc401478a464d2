#include "minigo/builder.hpp"

#include <deque>

#include "minigo/errors.hpp"

namespace minigo {

std::vector<const FuncDecl *> partition_program(const Program &program) {
  std::vector<const FuncDecl *> out;
  for (const auto &d : program.decls)
    if (!d->has_chan_params())
      out.push_back(d.get());
  return out;
}

namespace {

std::vector<std::string> chan_args(const Call &c) {
  std::vector<std::string> out;
  for (const Arg &a : c.args)
    if (a.is_chan)
      out.push_back(a.chan);
  return out;
}

IRStmt ir(IRStmt::Node node, const SourceLoc &loc) {
  return IRStmt{std::move(node), loc};
}

} // namespace

struct Translator::Impl {
  const Program &program;
  const FuncDecl &entry;

  // Channel identity by creation site.
  std::set<const FuncDecl *> reachable;
  std::map<std::string, std::vector<std::set<std::string>>> flow;
  std::map<const FuncDecl *, std::set<std::string>> makes;
  std::set<std::string> monitored_sites;

  struct ProcEntry {
    std::string name;
    const FuncDecl *callee;
    bool blocking;
  };
  std::vector<ProcEntry> procs;
  std::deque<const FuncDecl *> pending;
  std::set<const FuncDecl *> queued;
  std::map<const FuncDecl *, IRList> bodies;

  ParamEnv counters;
  std::map<std::string, ParamSymbol> symbols;
  std::vector<ChanDecl> channels;
  int loop_depth = 0;

  Impl(const Program &p, const FuncDecl &e) : program(p), entry(e) {
    analyse_sites();
  }

  const FuncDecl *target(const Call &c) const {
    return c.literal ? c.literal.get() : program.find(c.callee);
  }

  // --- channel aliasing --------------------------------------------------

  const std::set<std::string> &made_in(const FuncDecl *f) {
    auto it = makes.find(f);
    if (it != makes.end())
      return it->second;
    std::set<std::string> names;
    for_each_stmt(f->body, [&](const Stmt &s) {
      if (const MakeChan *m = s.as<MakeChan>())
        names.insert(m->chan);
    });
    return makes[f] = std::move(names);
  }

  std::set<std::string> resolve(const FuncDecl *f, const std::string &name) {
    if (made_in(f).count(name))
      return {f->name + "." + name};
    std::vector<std::string> params = f->chan_params();
    auto &positions = flow[f->name];
    positions.resize(params.size());
    for (std::size_t k = 0; k < params.size(); ++k)
      if (params[k] == name)
        return positions[k];
    return {};
  }

  template <typename Fn> void each_call(const FuncDecl *f, Fn &&fn) {
    for_each_stmt(f->body, [&](const Stmt &s) {
      if (const Call *c = s.as<Call>())
        fn(*c);
      else if (const Go *g = s.as<Go>())
        fn(g->call);
    });
  }

  void analyse_sites() {
    std::vector<const FuncDecl *> order{&entry};
    reachable.insert(&entry);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < order.size(); ++i) {
        const FuncDecl *f = order[i];
        each_call(f, [&](const Call &c) {
          std::vector<std::string> args = chan_args(c);
          const FuncDecl *g = target(c);
          if (args.empty() || !g)
            return;
          if (reachable.insert(g).second) {
            order.push_back(g);
            changed = true;
          }
          auto &positions = flow[g->name];
          positions.resize(std::max(positions.size(), g->chan_params().size()));
          for (std::size_t k = 0; k < args.size() && k < positions.size(); ++k)
            for (const std::string &site : resolve(f, args[k]))
              changed |= positions[k].insert(site).second;
        });
      }
    }
    for (const FuncDecl *f : order)
      for_each_stmt(f->body, [&](const Stmt &s) {
        if (const Close *c = s.as<Close>())
          for (const std::string &site : resolve(f, c->chan))
            monitored_sites.insert(site);
      });
  }

  bool monitored(const FuncDecl &fn, const std::string &name) {
    for (const std::string &site : resolve(&fn, name))
      if (monitored_sites.count(site))
        return true;
    return false;
  }

  // --- processes ---------------------------------------------------------

  std::string register_proc(const FuncDecl *callee, bool blocking) {
    std::string name = blocking ? callee->name : "go_" + callee->name;
    bool known = false;
    for (const ProcEntry &p : procs)
      known |= p.name == name;
    if (!known)
      procs.push_back(ProcEntry{name, callee, blocking});
    if (queued.insert(callee).second)
      pending.push_back(callee);
    return name;
  }

  IRStmt::Node run(const Call &c, bool blocking, const SourceLoc &loc) {
    std::vector<std::string> args = chan_args(c);
    const FuncDecl *g = target(c);
    if (!g)
      throw ModelError(ModelError::Kind::UnknownFunction, loc,
                       "call to undeclared function '" + c.callee +
                           "' with channel arguments");
    if (g->chan_params().size() != args.size())
      throw ModelError(ModelError::Kind::ArityMismatch, loc,
                       "'" + g->name + "' takes " +
                           std::to_string(g->chan_params().size()) +
                           " channel arguments, " + std::to_string(args.size()) +
                           " given");
    std::string proc = register_proc(g, blocking);
    if (blocking)
      return RunBlocking{proc, args};
    return RunAsync{proc, args};
  }

  // --- statements --------------------------------------------------------

  void note(const LookupResult &r) {
    for (const ParamSymbol &s : r.issued)
      symbols.emplace(s.name, s);
  }

  Result block(const ParamEnv &env, const StmtList &stmts, const FuncDecl &fn) {
    Result r{env, {}};
    for (const Stmt &s : stmts)
      stmt(r.env, s, fn, r.ir);
    if (r.ir.empty())
      r.ir.push_back(ir(Skip{}, {}));
    return r;
  }

  IRList loop_body(ParamEnv &env, const ParamEnv &start, const StmtList &body,
                   const FuncDecl &fn) {
    ++loop_depth;
    Result r = block(start, body, fn);
    --loop_depth;
    env.adopt_counters(r.env);
    return std::move(r.ir);
  }

  void loop(ParamEnv &env, const LoopControl &control, const StmtList &body,
            const FuncDecl &fn, const SourceLoc &loc, IRList &out) {
    LookupResult r = lookup(env, control);
    note(r);
    bool spawning = spawns(body, program, true);
    if (spawning || r.env == env) {
      ParamEnv inner = r.env;
      IRList ir_body = loop_body(inner, r.env, body, fn);
      env = r.env;
      env.adopt_counters(inner);
      out.push_back(ir(BoundedFor{r.lower, r.upper, std::move(ir_body)}, loc));
    } else {
      env.adopt_counters(r.env);
      IRList ir_body = loop_body(env, env, body, fn);
      out.push_back(ir(NDLoop{std::move(ir_body)}, loc));
    }
  }

  // Loops without a usable header: finite only when they spawn.
  void open_loop(ParamEnv &env, const StmtList &body, const FuncDecl &fn,
                 const SourceLoc &loc, bool forever, IRList &out) {
    if (spawns(body, program, true)) {
      ParamSymbol n = env.fresh(ParamSymbol::Role::LoopBound, loc);
      symbols.emplace(n.name, n);
      IRList ir_body = loop_body(env, env, body, fn);
      out.push_back(ir(BoundedFor{ParamRef::literal(0),
                                  ParamRef::named(n.name), std::move(ir_body)},
                       loc));
      return;
    }
    IRList ir_body = loop_body(env, env, body, fn);
    if (forever)
      out.push_back(ir(ForeverLoop{std::move(ir_body)}, loc));
    else
      out.push_back(ir(NDLoop{std::move(ir_body)}, loc));
  }

  void stmt(ParamEnv &env, const Stmt &s, const FuncDecl &fn, IRList &out) {
    const SourceLoc &loc = s.loc;
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MakeChan>) {
            LookupResult r = lookup(env, counting_loop(n.capacity),
                                    ParamSymbol::Role::Capacity);
            note(r);
            env = r.env;
            ChanDecl d;
            d.name = n.chan;
            d.capacity = r.upper;
            d.site = fn.name + "." + n.chan;
            d.monitored = monitored_sites.count(d.site) > 0;
            d.loc = loc;
            channels.push_back(d);
            out.push_back(ir(DeclareChan{d}, loc));
          } else if constexpr (std::is_same_v<T, Send>) {
            out.push_back(ir(SendIn{n.chan}, loc));
            if (monitored(fn, n.chan))
              out.push_back(ir(MonSendAck{n.chan}, loc));
          } else if constexpr (std::is_same_v<T, Recv>) {
            out.push_back(ir(RecvIn{n.chan}, loc));
          } else if constexpr (std::is_same_v<T, Close>) {
            out.push_back(ir(MonClose{n.chan}, loc));
          } else if constexpr (std::is_same_v<T, Select>) {
            GuardedChoice g;
            for (const CommClause &c : n.cases) {
              GuardedBranch b;
              if (const Send *snd = std::get_if<Send>(&c.comm)) {
                b.guard = Comm{true, snd->chan, c.loc};
                if (monitored(fn, snd->chan))
                  b.cont.push_back(ir(MonSendAck{snd->chan}, c.loc));
              } else {
                b.guard = Comm{false, std::get<Recv>(c.comm).chan, c.loc};
              }
              Result r = block(env, c.body, fn);
              env.adopt_counters(r.env);
              if (!(b.cont.size() == 1 && r.ir.size() == 1 && r.ir[0].as<Skip>()))
                b.cont.insert(b.cont.end(), r.ir.begin(), r.ir.end());
              g.branches.push_back(std::move(b));
            }
            if (n.default_body) {
              Result r = block(env, *n.default_body, fn);
              env.adopt_counters(r.env);
              g.default_branch = std::move(r.ir);
            }
            out.push_back(ir(std::move(g), loc));
          } else if constexpr (std::is_same_v<T, Call>) {
            if (chan_args(n).empty())
              out.push_back(ir(Skip{}, loc));
            else
              out.push_back(ir(run(n, true, loc), loc));
          } else if constexpr (std::is_same_v<T, Go>) {
            if (chan_args(n.call).empty())
              out.push_back(ir(Skip{}, loc));
            else
              out.push_back(ir(run(n.call, false, loc), loc));
          } else if constexpr (std::is_same_v<T, Block>) {
            for (const Stmt &inner : n.body)
              stmt(env, inner, fn, out);
          } else if constexpr (std::is_same_v<T, If>) {
            if (n.init)
              stmt(env, *n.init, fn, out);
            NDChoice c;
            for (const StmtList *branch : {&n.then_body, &n.else_body}) {
              Result r = block(env, *branch, fn);
              env.adopt_counters(r.env);
              c.branches.push_back(std::move(r.ir));
            }
            out.push_back(ir(std::move(c), loc));
          } else if constexpr (std::is_same_v<T, For>) {
            switch (n.form) {
            case For::Form::Clause:
              loop(env, n.control, n.body, fn, loc, out);
              break;
            case For::Form::While:
              open_loop(env, n.body, fn, loc, false, out);
              break;
            case For::Form::Infinite:
              open_loop(env, n.body, fn, loc, true, out);
              break;
            }
          } else if constexpr (std::is_same_v<T, ForRange>) {
            Expr upper = n.over.kind == Expr::Kind::IntLit
                             ? n.over
                             : Expr::opaque("len(" + n.over.text + ")",
                                            n.over.idents, n.over.loc);
            loop(env, counting_loop(upper), n.body, fn, loc, out);
          } else if constexpr (std::is_same_v<T, Switch>) {
            if (n.init)
              stmt(env, *n.init, fn, out);
            NDChoice c;
            for (const StmtList &branch : n.branches) {
              Result r = block(env, branch, fn);
              env.adopt_counters(r.env);
              c.branches.push_back(std::move(r.ir));
            }
            if (n.default_index < 0)
              c.branches.push_back({ir(Skip{}, loc)});
            out.push_back(ir(std::move(c), loc));
          } else if constexpr (std::is_same_v<T, Break>) {
            if (loop_depth == 0)
              throw ModelError(ModelError::Kind::UnsupportedStatement, loc,
                               "break outside of a loop");
            out.push_back(ir(BreakLoop{}, loc));
          } else if constexpr (std::is_same_v<T, Return>) {
            out.push_back(ir(ReturnProc{}, loc));
          } else {
            out.push_back(ir(Skip{}, loc));
          }
        },
        s.node);
  }

  // --- whole model -------------------------------------------------------

  IRList translate_function(const FuncDecl &f) {
    ParamEnv env;
    env.adopt_counters(counters);
    loop_depth = 0;
    Result r = block(env, f.body, f);
    counters.adopt_counters(r.env);
    return std::move(r.ir);
  }

  BehaviouralModel build() {
    BehaviouralModel m;
    m.file = program.file;
    m.name = entry.name;
    m.entry.name = entry.name;
    m.entry.callee = entry.name;
    m.entry.loc = entry.loc;
    m.entry.body = translate_function(entry);
    while (!pending.empty()) {
      const FuncDecl *f = pending.front();
      pending.pop_front();
      bodies[f] = translate_function(*f);
    }
    for (const ProcEntry &p : procs) {
      ProcDef def;
      def.name = p.name;
      def.callee = p.callee->name;
      def.chan_params = p.callee->chan_params();
      def.body = bodies.at(p.callee);
      def.completion_signal = p.blocking;
      def.loc = p.callee->loc;
      m.procs.push_back(std::move(def));
    }
    m.channels = channels;
    for (const ChanDecl &c : channels)
      if (c.monitored)
        m.monitored.insert(c.name);

    std::set<std::string> seen;
    auto use = [&](const ParamRef &ref) {
      if (!ref.is_literal && seen.insert(ref.symbol).second)
        m.free_params.push_back(symbols.at(ref.symbol));
    };
    auto scan = [&](const IRList &body) {
      walk_ir(body, [&](const IRStmt &s) {
        if (auto *f = s.as<BoundedFor>()) {
          use(f->from);
          use(f->to);
        } else if (auto *d = s.as<DeclareChan>()) {
          use(d->decl.capacity);
        }
      });
    };
    scan(m.entry.body);
    std::set<const FuncDecl *> scanned;
    for (const ProcEntry &p : procs)
      if (scanned.insert(p.callee).second)
        scan(bodies.at(p.callee));
    return m;
  }
};

Translator::Translator(const Program &program, const FuncDecl &entry)
    : impl_(std::make_unique<Impl>(program, entry)) {}

Translator::~Translator() = default;

Translator::Result Translator::trans_stmts(const ParamEnv &env,
                                           const StmtList &stmts,
                                           const FuncDecl &fn) {
  return impl_->block(env, stmts, fn);
}

bool Translator::is_monitored(const FuncDecl &fn, const std::string &name) const {
  return impl_->monitored(fn, name);
}

BehaviouralModel Translator::build() { return impl_->build(); }

BehaviouralModel build_model(const FuncDecl &entry, const Program &program) {
  return Translator(program, entry).build();
}

} // namespace minigo
