#include "minigo/validate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace minigo {

const char *to_string(Violation::Kind kind) {
  switch (kind) {
  case Violation::Kind::DuplicateName:
    return "DuplicateName";
  case Violation::Kind::ChannelInExpression:
    return "ChannelInExpression";
  case Violation::Kind::RecursiveSpawn:
    return "RecursiveSpawn";
  }
  return "?";
}

std::string Violation::describe() const {
  switch (kind) {
  case Kind::DuplicateName:
    return loc.str() + ": name '" + name + "' is declared more than once";
  case Kind::ChannelInExpression:
    return loc.str() + ": channel '" + name + "' is used inside an expression";
  case Kind::RecursiveSpawn:
    return loc.str() + ": recursive function '" + name + "' spawns goroutines";
  }
  return loc.str();
}

namespace {

// Value expressions held directly by a statement (not by nested ones).
std::vector<const Expr *> exprs_of(const Stmt &s) {
  std::vector<const Expr *> out;
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MakeChan>) {
          out.push_back(&n.capacity);
        } else if constexpr (std::is_same_v<T, Send>) {
          out.push_back(&n.value);
        } else if constexpr (std::is_same_v<T, Select>) {
          for (const CommClause &c : n.cases)
            if (auto *snd = std::get_if<Send>(&c.comm))
              out.push_back(&snd->value);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const Arg &a : n.args)
            if (!a.is_chan)
              out.push_back(&a.value);
        } else if constexpr (std::is_same_v<T, Go>) {
          for (const Arg &a : n.call.args)
            if (!a.is_chan)
              out.push_back(&a.value);
        } else if constexpr (std::is_same_v<T, If>) {
          out.push_back(&n.cond);
        } else if constexpr (std::is_same_v<T, For>) {
          if (n.control.init)
            out.push_back(&*n.control.init);
          if (n.control.bound)
            out.push_back(&*n.control.bound);
          if (n.while_cond)
            out.push_back(&*n.while_cond);
        } else if constexpr (std::is_same_v<T, ForRange>) {
          out.push_back(&n.over);
        } else if constexpr (std::is_same_v<T, Switch>) {
          if (n.tag)
            out.push_back(&*n.tag);
          for (const auto &labels : n.labels)
            for (const Expr &e : labels)
              out.push_back(&e);
        } else if constexpr (std::is_same_v<T, Return>) {
          for (const Expr &e : n.values)
            out.push_back(&e);
        } else if constexpr (std::is_same_v<T, Simple>) {
          for (const Expr &e : n.exprs)
            out.push_back(&e);
        } else if constexpr (std::is_same_v<T, ConstDecl>) {
          out.push_back(&n.value);
        }
      },
      s.node);
  return out;
}

// Variable names a statement introduces.
std::vector<std::string> declared_by(const Stmt &s) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MakeChan>) {
          out.push_back(n.chan);
        } else if constexpr (std::is_same_v<T, Recv>) {
          if (n.declares)
            out = n.vars;
        } else if constexpr (std::is_same_v<T, Select>) {
          for (const CommClause &c : n.cases)
            if (auto *r = std::get_if<Recv>(&c.comm); r && r->declares)
              out.insert(out.end(), r->vars.begin(), r->vars.end());
        } else if constexpr (std::is_same_v<T, For>) {
          if (n.control.init_text.find(":=") != std::string::npos &&
              !n.control.init_var.empty())
            out.push_back(n.control.init_var);
        } else if constexpr (std::is_same_v<T, ForRange>) {
          if (n.declares)
            out = n.vars;
        } else if constexpr (std::is_same_v<T, Simple>) {
          out = n.declared;
        } else if constexpr (std::is_same_v<T, ConstDecl>) {
          out.push_back(n.name);
        }
      },
      s.node);
  return out;
}

std::set<std::string> channels_of(const FuncDecl &d) {
  std::set<std::string> chans;
  for (const std::string &c : d.chan_params())
    chans.insert(c);
  for_each_stmt(d.body, [&](const Stmt &s) {
    if (const MakeChan *m = s.as<MakeChan>())
      chans.insert(m->chan);
  });
  return chans;
}

void check_names(const Program &p, std::vector<Violation> &out) {
  std::set<std::string> functions;
  std::set<std::string> variables;
  std::set<std::string> reported;
  auto note = [&](std::set<std::string> &seen, const std::string &name,
                  const SourceLoc &loc) {
    if (name == "_" || name.empty())
      return;
    if (!seen.insert(name).second && reported.insert(name).second)
      out.push_back({Violation::Kind::DuplicateName, name, loc});
  };
  for (const ConstDecl &c : p.consts)
    note(variables, c.name, c.value.loc);
  for (const auto &d : p.decls) {
    note(functions, d->name, d->loc);
    for (const Param &param : d->params)
      note(variables, param.name, d->loc);
    for_each_stmt(d->body, [&](const Stmt &s) {
      for (const std::string &name : declared_by(s))
        note(variables, name, s.loc);
    });
  }
}

void check_channel_exprs(const Program &p, std::vector<Violation> &out) {
  for (const auto &d : p.decls) {
    std::set<std::string> chans = channels_of(*d);
    for_each_stmt(d->body, [&](const Stmt &s) {
      for (const Expr *e : exprs_of(s))
        for (const std::string &id : e->idents)
          if (chans.count(id)) {
            out.push_back({Violation::Kind::ChannelInExpression, id,
                           e->loc.line > 0 ? e->loc : s.loc});
            break;
          }
    });
  }
}

void check_recursion(const Program &p, std::vector<Violation> &out) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < p.decls.size(); ++i)
    index.emplace(p.decls[i]->name, i);
  std::size_t n = p.decls.size();
  std::vector<std::vector<std::size_t>> edges(n);
  std::vector<bool> has_go(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for_each_stmt(p.decls[i]->body, [&](const Stmt &s) {
      const Call *call = s.as<Call>();
      if (const Go *go = s.as<Go>()) {
        has_go[i] = true;
        call = &go->call;
      }
      if (call) {
        auto it = index.find(call->callee);
        if (it != index.end())
          edges[i].push_back(it->second);
      }
    });
  }

  // Tarjan's strongly connected components.
  std::vector<int> order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    order[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : edges[v]) {
      if (order[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], order[w]);
      }
    }
    if (low[v] == order[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      components.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (order[v] < 0)
      visit(v);

  std::vector<std::size_t> flagged;
  for (const auto &comp : components) {
    bool cyclic = comp.size() > 1 ||
                  std::count(edges[comp[0]].begin(), edges[comp[0]].end(),
                             comp[0]) > 0;
    bool spawns = std::any_of(comp.begin(), comp.end(),
                              [&](std::size_t v) { return has_go[v]; });
    if (cyclic && spawns)
      flagged.insert(flagged.end(), comp.begin(), comp.end());
  }
  std::sort(flagged.begin(), flagged.end());
  for (std::size_t v : flagged)
    out.push_back({Violation::Kind::RecursiveSpawn, p.decls[v]->name,
                   p.decls[v]->loc});
}

} // namespace

std::vector<Violation> validate_assumptions(const Program &program) {
  std::vector<Violation> out;
  check_names(program, out);
  check_channel_exprs(program, out);
  check_recursion(program, out);
  return out;
}

} // namespace minigo
