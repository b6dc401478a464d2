#include "minigo/model.hpp"

#include <sstream>

namespace minigo {

const ProcDef *BehaviouralModel::find_proc(const std::string &name) const {
  for (const ProcDef &p : procs)
    if (p.name == name)
      return &p;
  return nullptr;
}

namespace {

std::string args_text(const std::vector<std::string> &args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i)
    out += (i ? ", " : "") + args[i];
  return out + ")";
}

void emit(std::ostringstream &out, const IRList &body, int depth);

void line(std::ostringstream &out, int depth, const std::string &text) {
  out << std::string(depth * 2, ' ') << text << "\n";
}

void emit(std::ostringstream &out, const IRStmt &s, int depth) {
  std::visit(
      [&](const auto &n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SendIn>) {
          line(out, depth, "SendIn " + n.chan);
        } else if constexpr (std::is_same_v<T, RecvIn>) {
          line(out, depth, "RecvIn " + n.chan);
        } else if constexpr (std::is_same_v<T, MonSendAck>) {
          line(out, depth, "MonSendAck " + n.chan);
        } else if constexpr (std::is_same_v<T, MonClose>) {
          line(out, depth, "MonClose " + n.chan);
        } else if constexpr (std::is_same_v<T, NDChoice>) {
          line(out, depth, "NDChoice");
          for (const IRList &b : n.branches) {
            line(out, depth + 1, "branch");
            emit(out, b, depth + 2);
          }
        } else if constexpr (std::is_same_v<T, GuardedChoice>) {
          line(out, depth, "GuardedChoice");
          for (const GuardedBranch &b : n.branches) {
            line(out, depth + 1,
                 std::string(b.guard.is_send ? "guard SendIn " : "guard RecvIn ") +
                     b.guard.chan);
            emit(out, b.cont, depth + 2);
          }
          if (n.default_branch) {
            line(out, depth + 1, "default");
            emit(out, *n.default_branch, depth + 2);
          }
        } else if constexpr (std::is_same_v<T, RunBlocking>) {
          line(out, depth, "RunBlocking " + n.proc + args_text(n.args));
        } else if constexpr (std::is_same_v<T, RunAsync>) {
          line(out, depth, "RunAsync " + n.proc + args_text(n.args));
        } else if constexpr (std::is_same_v<T, BoundedFor>) {
          line(out, depth, "BoundedFor " + n.from.str() + " " + n.to.str());
          emit(out, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, NDLoop>) {
          line(out, depth, "NDLoop");
          emit(out, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, ForeverLoop>) {
          line(out, depth, "ForeverLoop");
          emit(out, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, DeclareChan>) {
          line(out, depth,
               "DeclareChan " + n.decl.name + " cap=" + n.decl.capacity.str() +
                   (n.decl.monitored ? " monitored" : ""));
        } else if constexpr (std::is_same_v<T, Skip>) {
          line(out, depth, "Skip");
        } else if constexpr (std::is_same_v<T, BreakLoop>) {
          line(out, depth, "BreakLoop");
        } else if constexpr (std::is_same_v<T, ReturnProc>) {
          line(out, depth, "Return");
        }
      },
      s.node);
}

void emit(std::ostringstream &out, const IRList &body, int depth) {
  for (const IRStmt &s : body)
    emit(out, s, depth);
}

} // namespace

std::string to_text(const IRList &body, int indent) {
  std::ostringstream out;
  emit(out, body, indent);
  return out.str();
}

std::string to_text(const BehaviouralModel &m) {
  std::ostringstream out;
  out << "model " << m.name << "\n";
  for (const ParamSymbol &p : m.free_params)
    out << "param " << p.name << " role=" << to_string(p.role)
        << " origin=" << p.origin.line << ":" << p.origin.column
        << " source=" << (p.source.empty() ? "-" : p.source) << "\n";
  for (const ChanDecl &c : m.channels)
    out << "channel " << c.name << " site=" << c.site
        << " cap=" << c.capacity.str() << (c.monitored ? " monitored" : "")
        << "\n";
  out << "init " << m.entry.name << "\n";
  emit(out, m.entry.body, 1);
  for (const ProcDef &p : m.procs) {
    out << "proc " << p.name << args_text(p.chan_params)
        << (p.completion_signal ? " blocking" : " async") << "\n";
    emit(out, p.body, 1);
  }
  return out.str();
}

} // namespace minigo
