#include "minigo/promela.hpp"

#include <filesystem>
#include <map>
#include <sstream>

#include "minigo/errors.hpp"

namespace minigo {

namespace {

const char *const kMonitor = R"(proctype chanMonitor(Chandef ch) {
end_open:
  do
  :: ch.sending!false
  :: ch.closing!false -> break
  od;
end_closed:
  do
  :: ch.in!0
  :: ch.sending!true -> assert(false)
  :: ch.closing!true -> assert(false)
  od
}
)";

class ProcEmitter {
public:
  explicit ProcEmitter(const Bounds &b) : b_(b) {}

  std::string proc(const ProcDef &def, bool is_init) {
    decls_.clear();
    body_.str("");
    names_.clear();
    loops_ = 0;
    uses_state_ = false;
    uses_return_ = false;

    list(def.body, 1);
    if (uses_return_)
      line(1, "stop_process: skip;");
    if (def.completion_signal)
      line(1, "child!0;");

    std::ostringstream out;
    if (is_init) {
      out << "init {\n";
    } else {
      out << "proctype " << def.name << "(";
      for (std::size_t i = 0; i < def.chan_params.size(); ++i)
        out << (i ? "; " : "") << "Chandef " << def.chan_params[i];
      if (def.completion_signal)
        out << (def.chan_params.empty() ? "" : "; ") << "chan child";
      out << ") {\n";
    }
    if (uses_state_)
      out << "  bool state;\n";
    for (const std::string &d : decls_)
      out << "  " << d << "\n";
    std::string body = body_.str();
    if (body.empty())
      body = "  skip;\n";
    out << body << "}\n";
    return out.str();
  }

private:
  std::int64_t value(const ParamRef &r) const {
    if (r.is_literal)
      return r.value;
    auto it = b_.values.find(r.symbol);
    if (it == b_.values.end())
      throw MissingBound(r.symbol);
    return it->second;
  }

  static std::string note(const ParamRef &r) {
    return r.is_literal ? "" : " /* " + r.symbol + " */";
  }

  void line(int depth, const std::string &text) {
    body_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << text << "\n";
  }

  std::string unique(const std::string &base) {
    int &n = names_[base];
    std::string name = n == 0 ? base : base + std::to_string(n);
    ++n;
    return name;
  }

  void branch(const IRList &body, int depth, std::size_t skip = 0) {
    auto before = body_.tellp();
    if (body.size() > skip) {
      IRList rest(body.begin() + static_cast<std::ptrdiff_t>(skip), body.end());
      list(rest, depth);
    }
    if (body_.tellp() == before)
      line(depth, "skip;");
  }

  void list(const IRList &body, int depth) {
    for (const IRStmt &s : body)
      stmt(s, depth);
  }

  void stmt(const IRStmt &s, int depth) {
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, SendIn>) {
            line(depth, n.chan + ".in!0;");
          } else if constexpr (std::is_same_v<T, RecvIn>) {
            line(depth, n.chan + ".in?0;");
          } else if constexpr (std::is_same_v<T, MonSendAck>) {
            uses_state_ = true;
            line(depth, n.chan + ".sending?state;");
          } else if constexpr (std::is_same_v<T, MonClose>) {
            uses_state_ = true;
            line(depth, n.chan + ".closing?state;");
          } else if constexpr (std::is_same_v<T, NDChoice>) {
            line(depth, "if");
            for (const IRList &b : n.branches) {
              line(depth, ":: true ->");
              branch(b, depth + 1);
            }
            line(depth, "fi;");
          } else if constexpr (std::is_same_v<T, GuardedChoice>) {
            if (n.branches.empty() && !n.default_branch) {
              line(depth, "false;");
              return;
            }
            line(depth, "if");
            for (const GuardedBranch &b : n.branches) {
              line(depth, ":: " + b.guard.chan + (b.guard.is_send ? ".in!0 ->" : ".in?0 ->"));
              branch(b.cont, depth + 1);
            }
            if (n.default_branch) {
              line(depth, ":: true ->");
              branch(*n.default_branch, depth + 1);
            }
            line(depth, "fi;");
          } else if constexpr (std::is_same_v<T, RunBlocking>) {
            std::string ch = unique("child_" + n.proc);
            decls_.push_back("chan " + ch + " = [0] of {int};");
            std::string args;
            for (const std::string &a : n.args)
              args += a + ", ";
            line(depth, "run " + n.proc + "(" + args + ch + ");");
            line(depth, ch + "?0;");
          } else if constexpr (std::is_same_v<T, RunAsync>) {
            std::string args;
            for (std::size_t i = 0; i < n.args.size(); ++i)
              args += (i ? ", " : "") + n.args[i];
            line(depth, "run " + n.proc + "(" + args + ");");
          } else if constexpr (std::is_same_v<T, BoundedFor>) {
            std::string var = "i" + std::to_string(loops_++);
            decls_.push_back("int " + var + ";");
            line(depth, "for (" + var + " : " + std::to_string(value(n.from)) +
                            note(n.from) + " .. " +
                            std::to_string(value(n.to) - 1) + note(n.to) + ") {");
            branch(n.body, depth + 1);
            line(depth, "};");
          } else if constexpr (std::is_same_v<T, NDLoop>) {
            line(depth, "do");
            line(depth, ":: true ->");
            branch(n.body, depth + 1);
            line(depth, ":: true -> break");
            line(depth, "od;");
          } else if constexpr (std::is_same_v<T, ForeverLoop>) {
            line(depth, "do");
            line(depth, ":: true ->");
            branch(n.body, depth + 1);
            line(depth, "od;");
          } else if constexpr (std::is_same_v<T, DeclareChan>) {
            const ChanDecl &d = n.decl;
            std::int64_t cap = value(d.capacity);
            bool first = names_.find(d.name) == names_.end();
            std::string in = unique(d.name + "_in");
            if (first) {
              names_[d.name] = 1;
              decls_.push_back("Chandef " + d.name + ";");
            }
            decls_.push_back("chan " + in + " = [" + std::to_string(cap) +
                             "] of {int};" + note(d.capacity));
            line(depth, d.name + ".in = " + in + ";");
            if (d.monitored) {
              std::string snd = unique(d.name + "_sending");
              std::string cls = unique(d.name + "_closing");
              decls_.push_back("chan " + snd + " = [0] of {bool};");
              decls_.push_back("chan " + cls + " = [0] of {bool};");
              line(depth, d.name + ".sending = " + snd + ";");
              line(depth, d.name + ".closing = " + cls + ";");
              line(depth, "run chanMonitor(" + d.name + ");");
            }
          } else if constexpr (std::is_same_v<T, Skip>) {
          } else if constexpr (std::is_same_v<T, BreakLoop>) {
            line(depth, "break;");
          } else if constexpr (std::is_same_v<T, ReturnProc>) {
            uses_return_ = true;
            line(depth, "goto stop_process;");
          }
        },
        s.node);
  }

  const Bounds &b_;
  std::vector<std::string> decls_;
  std::ostringstream body_;
  std::map<std::string, int> names_;
  int loops_ = 0;
  bool uses_state_ = false;
  bool uses_return_ = false;
};

} // namespace

std::string emit_model(const BehaviouralModel &model, const Bounds &bounds) {
  for (const ParamSymbol &p : model.free_params)
    if (!bounds.values.count(p.name))
      throw MissingBound(p.name);

  std::ostringstream out;
  out << "// " << model.name << " from "
      << std::filesystem::path(model.file).filename().string() << "\n";
  for (const ParamSymbol &p : model.free_params)
    out << "int " << p.name << " = " << bounds.values.at(p.name) << "; // "
        << to_string(p.role) << " at " << p.origin.line << ":" << p.origin.column
        << (p.source.empty() ? "" : ", " + p.source) << "\n";
  out << "\n";

  bool any_chan = false;
  auto mark = [&](const IRList &body) {
    walk_ir(body, [&](const IRStmt &s) {
      if (s.as<DeclareChan>())
        any_chan = true;
    });
  };
  mark(model.entry.body);
  for (const ProcDef &p : model.procs) {
    mark(p.body);
    if (!p.chan_params.empty())
      any_chan = true;
  }
  if (any_chan)
    out << "typedef Chandef {\n  chan in;\n  chan sending;\n  chan closing;\n}\n\n";
  if (!model.monitored.empty())
    out << kMonitor << "\n";

  ProcEmitter emitter(bounds);
  for (const ProcDef &p : model.procs)
    out << emitter.proc(p, false) << "\n";
  out << emitter.proc(model.entry, true);
  return out.str();
}

std::string promela_file_name(const BehaviouralModel &model, std::size_t index) {
  return model.name + "_" + std::to_string(index) + ".pml";
}

} // namespace minigo
