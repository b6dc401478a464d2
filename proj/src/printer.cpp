#include <sstream>

#include "minigo/parser.hpp"

namespace minigo {

namespace {

const char *compare_text(CompareOp op) {
  switch (op) {
  case CompareOp::Less:
    return "<";
  case CompareOp::Greater:
    return ">";
  case CompareOp::LessEq:
    return "<=";
  case CompareOp::GreaterEq:
    return ">=";
  case CompareOp::NotEq:
    return "!=";
  default:
    return "?";
  }
}

std::string join_names(const std::vector<std::string> &names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i)
    out += (i ? ", " : "") + names[i];
  return out;
}

class SourcePrinter {
public:
  std::string run(const Program &p) {
    for (const ConstDecl &c : p.consts)
      out_ << "const " << c.name << " = " << c.value.text << "\n";
    if (!p.consts.empty())
      out_ << "\n";
    bool first = true;
    for (const auto &d : p.decls) {
      if (d->is_literal())
        continue;
      if (!first)
        out_ << "\n";
      first = false;
      out_ << "func " << d->name << signature(*d) << " ";
      block(d->body, 0);
      out_ << "\n";
    }
    return out_.str();
  }

private:
  static std::string signature(const FuncDecl &d) {
    std::string out = "(";
    for (std::size_t i = 0; i < d.params.size(); ++i)
      out += (i ? ", " : "") + d.params[i].name + " " + d.params[i].type;
    return out + ")";
  }

  void indent(int depth) { out_ << std::string(depth * 4, ' '); }

  void block(const StmtList &body, int depth) {
    out_ << "{\n";
    stmts(body, depth + 1);
    indent(depth);
    out_ << "}";
  }

  void stmts(const StmtList &body, int depth) {
    for (const Stmt &s : body) {
      indent(depth);
      stmt(s, depth);
      out_ << "\n";
    }
  }

  std::string call_text(const Call &c, int depth) {
    std::string head;
    std::size_t own_args = c.args.size();
    if (c.literal) {
      own_args -= c.literal->captured.size();
      std::ostringstream tmp;
      std::swap(tmp, out_);
      out_ << "func" << signature(*c.literal) << " ";
      block(c.literal->body, depth);
      std::swap(tmp, out_);
      head = tmp.str();
    } else {
      head = c.callee;
    }
    head += "(";
    for (std::size_t i = 0; i < own_args; ++i) {
      const Arg &a = c.args[i];
      head += (i ? ", " : "") + (a.is_chan ? a.chan : a.value.text);
    }
    return head + ")";
  }

  void simple(const Stmt &s, int depth) {
    // Headers only contain simple statements.
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Simple> || std::is_same_v<T, Send> ||
                        std::is_same_v<T, Recv> || std::is_same_v<T, MakeChan> ||
                        std::is_same_v<T, Close> || std::is_same_v<T, Call>)
            stmt(s, depth);
          else
            out_ << "/* unsupported header */";
        },
        s.node);
  }

  void comm(const std::variant<Send, Recv> &c) {
    if (auto *s = std::get_if<Send>(&c)) {
      out_ << s->chan << " <- " << s->value.text;
    } else {
      const Recv &r = std::get<Recv>(c);
      if (!r.vars.empty())
        out_ << join_names(r.vars) << (r.declares ? " := " : " = ");
      out_ << "<-" << r.chan;
    }
  }

  void stmt(const Stmt &s, int depth) {
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MakeChan>) {
            out_ << n.chan << " := make(chan int, " << n.capacity.text << ")";
          } else if constexpr (std::is_same_v<T, Send>) {
            out_ << n.chan << " <- " << n.value.text;
          } else if constexpr (std::is_same_v<T, Recv>) {
            comm(n);
          } else if constexpr (std::is_same_v<T, Close>) {
            out_ << "close(" << n.chan << ")";
          } else if constexpr (std::is_same_v<T, Select>) {
            out_ << "select {\n";
            for (const CommClause &c : n.cases) {
              indent(depth);
              out_ << "case ";
              comm(c.comm);
              out_ << ":\n";
              stmts(c.body, depth + 1);
            }
            if (n.default_body) {
              indent(depth);
              out_ << "default:\n";
              stmts(*n.default_body, depth + 1);
            }
            indent(depth);
            out_ << "}";
          } else if constexpr (std::is_same_v<T, Call>) {
            out_ << call_text(n, depth);
          } else if constexpr (std::is_same_v<T, Go>) {
            out_ << "go " << call_text(n.call, depth);
          } else if constexpr (std::is_same_v<T, Block>) {
            block(n.body, depth);
          } else if constexpr (std::is_same_v<T, If>) {
            out_ << "if ";
            if (n.init) {
              simple(*n.init, depth);
              out_ << "; ";
            }
            out_ << n.cond.text << " ";
            block(n.then_body, depth);
            if (n.else_body.size() == 1 && n.else_body[0].template as<If>()) {
              out_ << " else ";
              stmt(n.else_body[0], depth);
            } else if (!n.else_body.empty()) {
              out_ << " else ";
              block(n.else_body, depth);
            }
          } else if constexpr (std::is_same_v<T, For>) {
            out_ << "for ";
            if (n.form == For::Form::While) {
              out_ << n.while_cond->text << " ";
            } else if (n.form == For::Form::Clause) {
              const LoopControl &c = n.control;
              out_ << c.init_text << "; ";
              if (c.has_cond) {
                if (c.op == CompareOp::Other)
                  out_ << c.bound->text;
                else
                  out_ << c.cond_var << " " << compare_text(c.op) << " "
                       << c.bound->text;
              }
              out_ << "; " << c.post_text << " ";
            }
            block(n.body, depth);
          } else if constexpr (std::is_same_v<T, ForRange>) {
            out_ << "for ";
            if (!n.vars.empty())
              out_ << join_names(n.vars) << (n.declares ? " := " : " = ");
            out_ << "range " << n.over.text << " ";
            block(n.body, depth);
          } else if constexpr (std::is_same_v<T, Switch>) {
            out_ << "switch ";
            if (n.init) {
              simple(*n.init, depth);
              out_ << "; ";
            }
            if (n.tag)
              out_ << n.tag->text << " ";
            out_ << "{\n";
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
              indent(depth);
              if (static_cast<int>(i) == n.default_index) {
                out_ << "default:\n";
              } else {
                out_ << "case ";
                for (std::size_t j = 0; j < n.labels[i].size(); ++j)
                  out_ << (j ? ", " : "") << n.labels[i][j].text;
                out_ << ":\n";
              }
              stmts(n.branches[i], depth + 1);
            }
            indent(depth);
            out_ << "}";
          } else if constexpr (std::is_same_v<T, Break>) {
            out_ << "break";
          } else if constexpr (std::is_same_v<T, Return>) {
            out_ << "return";
            for (std::size_t i = 0; i < n.values.size(); ++i)
              out_ << (i ? ", " : " ") << n.values[i].text;
          } else if constexpr (std::is_same_v<T, Simple>) {
            out_ << n.text;
          } else if constexpr (std::is_same_v<T, ConstDecl>) {
            out_ << "const " << n.name << " = " << n.value.text;
          }
        },
        s.node);
  }

  std::ostringstream out_;
};

const char *expr_kind(Expr::Kind k) {
  switch (k) {
  case Expr::Kind::IntLit:
    return "int";
  case Expr::Kind::BoolLit:
    return "bool";
  case Expr::Kind::Var:
    return "var";
  default:
    return "opaque";
  }
}

// S-expression dump without locations.
class Dumper {
public:
  std::string run(const Program &p) {
    for (const ConstDecl &c : p.consts)
      out_ << "(const " << c.name << " " << expr(c.value) << ")\n";
    for (const auto &d : p.decls) {
      out_ << "(func " << d->name;
      if (d->is_literal())
        out_ << " :in " << d->enclosing;
      out_ << " (";
      for (std::size_t i = 0; i < d->params.size(); ++i)
        out_ << (i ? " " : "") << (d->params[i].is_chan ? "chan:" : "val:")
             << d->params[i].name;
      out_ << ")";
      if (!d->captured.empty())
        out_ << " :captures (" << join_names(d->captured) << ")";
      out_ << "\n";
      list(d->body, 1);
      out_ << ")\n";
    }
    return out_.str();
  }

private:
  static std::string expr(const Expr &e) {
    return std::string("[") + expr_kind(e.kind) + " " + e.text + "]";
  }

  void line(int depth, const std::string &text) {
    out_ << std::string(depth * 2, ' ') << text << "\n";
  }

  void list(const StmtList &body, int depth) {
    for (const Stmt &s : body)
      stmt(s, depth);
  }

  static std::string call(const Call &c) {
    std::string out = c.callee + " (";
    for (std::size_t i = 0; i < c.args.size(); ++i)
      out += (i ? " " : "") +
             (c.args[i].is_chan ? "chan:" + c.args[i].chan : expr(c.args[i].value));
    return out + ")";
  }

  static std::string comm(const std::variant<Send, Recv> &c) {
    if (auto *s = std::get_if<Send>(&c))
      return "send " + s->chan + " " + expr(s->value);
    const Recv &r = std::get<Recv>(c);
    return "recv " + r.chan + " (" + join_names(r.vars) + ")" +
           (r.declares ? " :=" : "");
  }

  void stmt(const Stmt &s, int d) {
    std::visit(
        [&](const auto &n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MakeChan>) {
            line(d, "make " + n.chan + " " + expr(n.capacity));
          } else if constexpr (std::is_same_v<T, Send>) {
            line(d, "send " + n.chan + " " + expr(n.value));
          } else if constexpr (std::is_same_v<T, Recv>) {
            line(d, comm(n));
          } else if constexpr (std::is_same_v<T, Close>) {
            line(d, "close " + n.chan);
          } else if constexpr (std::is_same_v<T, Select>) {
            line(d, "select");
            for (const CommClause &c : n.cases) {
              line(d + 1, "case " + comm(c.comm));
              list(c.body, d + 2);
            }
            if (n.default_body) {
              line(d + 1, "default");
              list(*n.default_body, d + 2);
            }
          } else if constexpr (std::is_same_v<T, Call>) {
            line(d, "call " + call(n));
          } else if constexpr (std::is_same_v<T, Go>) {
            line(d, "go " + call(n.call));
          } else if constexpr (std::is_same_v<T, Block>) {
            line(d, "block");
            list(n.body, d + 1);
          } else if constexpr (std::is_same_v<T, If>) {
            line(d, "if " + expr(n.cond));
            if (n.init) {
              line(d + 1, "init");
              stmt(*n.init, d + 2);
            }
            line(d + 1, "then");
            list(n.then_body, d + 2);
            line(d + 1, "else");
            list(n.else_body, d + 2);
          } else if constexpr (std::is_same_v<T, For>) {
            const LoopControl &c = n.control;
            if (n.form == For::Form::Infinite) {
              line(d, "for-ever");
            } else if (n.form == For::Form::While) {
              line(d, "for-while " + expr(*n.while_cond));
            } else {
              std::string head = "for " + c.init_var + " " +
                                 (c.init ? expr(*c.init) : "-") + "; " +
                                 c.cond_var + " " + compare_text(c.op) + " " +
                                 (c.bound ? expr(*c.bound) : "-") + "; " +
                                 c.post_var + " " +
                                 (c.mutator == Mutator::Inc   ? "++"
                                  : c.mutator == Mutator::Dec ? "--"
                                                              : "other") +
                                 " | " + c.init_text + " | " + c.post_text;
              line(d, head);
            }
            list(n.body, d + 1);
          } else if constexpr (std::is_same_v<T, ForRange>) {
            line(d, "range (" + join_names(n.vars) + ") " + expr(n.over));
            list(n.body, d + 1);
          } else if constexpr (std::is_same_v<T, Switch>) {
            line(d, std::string("switch") + (n.tag ? " " + expr(*n.tag) : ""));
            if (n.init) {
              line(d + 1, "init");
              stmt(*n.init, d + 2);
            }
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
              std::string head = static_cast<int>(i) == n.default_index
                                     ? "default"
                                     : "case";
              for (const Expr &e : n.labels[i])
                head += " " + expr(e);
              line(d + 1, head);
              list(n.branches[i], d + 2);
            }
          } else if constexpr (std::is_same_v<T, Break>) {
            line(d, "break");
          } else if constexpr (std::is_same_v<T, Return>) {
            std::string out = "return";
            for (const Expr &e : n.values)
              out += " " + expr(e);
            line(d, out);
          } else if constexpr (std::is_same_v<T, Simple>) {
            line(d, "simple \"" + n.text + "\"");
          } else if constexpr (std::is_same_v<T, ConstDecl>) {
            line(d, "const " + n.name + " " + expr(n.value));
          }
        },
        s.node);
  }

  std::ostringstream out_;
};

} // namespace

std::string print_program(const Program &program) {
  return SourcePrinter().run(program);
}

std::string dump_ast(const Program &program) { return Dumper().run(program); }

} // namespace minigo
