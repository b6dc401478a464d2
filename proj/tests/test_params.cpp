#include <random>
#include <set>

#include "doctest.h"
#include "minigo/builder.hpp"
#include "minigo/errors.hpp"
#include "minigo/params.hpp"
#include "minigo/parser.hpp"

using namespace minigo;

namespace {

// Parses `for <header> {}` inside a function and returns its control.
LoopControl control(const std::string &header) {
  Program p = parse_program("func main() {\n  for " + header + " {\n  }\n}\n");
  const For *f = p.decls[0]->body[0].as<For>();
  REQUIRE(f != nullptr);
  return f->control;
}

Expr opaque(const std::string &text) { return Expr::opaque(text, {}); }

bool same_dom_prefix(const ParamEnv &small, const ParamEnv &big) {
  for (const auto &[key, sym] : small.bindings()) {
    const ParamSymbol *s = big.find(opaque(key));
    if (!s || s->name != sym.name)
      return false;
  }
  return true;
}

} // namespace

TEST_CASE("bound_extract: increasing loop gives (e1, e2)") {
  BoundPair b = bound_extract(control("i := 0; i < n; i++"));
  REQUIRE(b.present());
  CHECK(*b.lower == Expr::int_lit(0));
  CHECK(*b.upper == Expr::var("n"));
}

TEST_CASE("bound_extract: decreasing loop gives (e2, e1)") {
  BoundPair b = bound_extract(control("i := n; i > 0; i--"));
  REQUIRE(b.present());
  CHECK(*b.lower == Expr::int_lit(0));
  CHECK(*b.upper == Expr::var("n"));
}

TEST_CASE("bound_extract: opaque bound expressions are kept") {
  BoundPair b = bound_extract(control("i := 0; i < len(files); i++"));
  REQUIRE(b.present());
  CHECK(b.upper->kind == Expr::Kind::Opaque);
  CHECK(b.upper->text == "len(files)");
}

TEST_CASE("bound_extract: unrecognized shapes give bottom") {
  for (const char *h : {"i := 0; i != 10; i++", "i := 0; i < 10; i--",
                        "i := 10; i > 0; i++", "i := 0; j < 10; i++",
                        "i := 0; i < 10; j++", "i := 0; i < 10; i += 2",
                        "i := 0; i < 10;", "; i < 10; i++"}) {
    CAPTURE(h);
    BoundPair b = bound_extract(control(h));
    CHECK_FALSE(b.present());
  }
}

TEST_CASE("bound_extract: non-strict comparison against a literal") {
  BoundPair up = bound_extract(control("i := 0; i <= 4; i++"));
  REQUIRE(up.present());
  CHECK(*up.upper == Expr::int_lit(5));
  BoundPair down = bound_extract(control("i := 4; i >= 0; i--"));
  REQUIRE(down.present());
  CHECK(*down.lower == Expr::int_lit(-1));
  CHECK(*down.upper == Expr::int_lit(4));
  CHECK_FALSE(bound_extract(control("i := 0; i <= n; i++")).present());
}

TEST_CASE("lookup: integers map to themselves") {
  ParamEnv env;
  LookupResult r = lookup(env, control("i := 0; i < 10; i++"));
  CHECK(r.recognized);
  CHECK(r.lower == ParamRef::literal(0));
  CHECK(r.upper == ParamRef::literal(10));
  CHECK(r.env == env);
  CHECK(r.env.size() == 0);
  CHECK(r.issued.empty());
}

TEST_CASE("lookup: new expression receives a fresh symbol") {
  ParamEnv env;
  LookupResult r = lookup(env, control("i := n; i > 0; i--"));
  CHECK(r.recognized);
  CHECK(r.lower == ParamRef::literal(0));
  CHECK(r.upper == ParamRef::named("n_0"));
  REQUIRE(r.issued.size() == 1);
  CHECK(r.issued[0].name == "n_0");
  CHECK(r.issued[0].source == "n");
  CHECK(r.env.size() == 1);
  CHECK(r.env.find(Expr::var("n"))->name == "n_0");
}

TEST_CASE("lookup: known expression is reused") {
  ParamEnv env;
  ParamSymbol s = env.bind(opaque("len(files)"), ParamSymbol::Role::Capacity);
  CHECK(s.name == "len_files_0");
  LookupResult r = lookup(env, control("i := 0; i < len(files); i++"));
  CHECK(r.upper == ParamRef::named("len_files_0"));
  CHECK(r.issued.empty());
  CHECK(r.env == env);
  LookupResult spaced = lookup(env, control("j := 0; j < len( files ); j++"));
  CHECK(spaced.upper == ParamRef::named("len_files_0"));
}

TEST_CASE("lookup: both bounds new") {
  ParamEnv env;
  LookupResult r = lookup(env, control("i := lo; i < hi; i++"));
  CHECK(r.lower == ParamRef::named("lo_0"));
  CHECK(r.upper == ParamRef::named("hi_0"));
  CHECK(r.env.size() == 2);
}

TEST_CASE("lookup: unrecognized loop issues two fresh symbols and keeps the map") {
  ParamEnv env;
  env.bind(Expr::var("n"), ParamSymbol::Role::LoopBound);
  LookupResult r = lookup(env, control("i := 0; i != 10; i++"));
  CHECK_FALSE(r.recognized);
  CHECK(r.env == env);
  CHECK_FALSE(r.lower.is_literal);
  CHECK_FALSE(r.upper.is_literal);
  CHECK(r.lower.symbol != r.upper.symbol);
  CHECK(r.lower.symbol == "fresh_0");
  CHECK(r.upper.symbol == "fresh_1");
  LookupResult again = lookup(r.env, control("i := 0; i != 10; i++"));
  CHECK(again.lower.symbol == "fresh_2");
}

TEST_CASE("lookup: repeated names get increasing suffixes") {
  ParamEnv env;
  LookupResult a = lookup(env, control("i := 0; i < count(); i++"));
  CHECK(a.upper == ParamRef::named("count_0"));
  // Keys are exact texts, so a new text gets a symbol of its own.
  LookupResult b = lookup(a.env, control("i := 0; i < count(  ) + 0; i++"));
  CHECK(b.upper.symbol == "count_0_0");
}

TEST_CASE("symbol_base sanitizes expression text") {
  CHECK(symbol_base("len(files)") == "len_files");
  CHECK(symbol_base("n") == "n");
  CHECK(symbol_base("a.b[3]") == "a_b_3");
  CHECK(symbol_base("2*n") == "p_2_n");
  CHECK(symbol_base("()") == "param");
}

TEST_CASE("lookup properties over generated loop headers") {
  std::mt19937 rng(7);
  const std::vector<std::string> exprs = {"0", "1", "7", "n", "m", "len(xs)",
                                          "len(ys)", "f(n)", "n+1"};
  const std::vector<std::string> shapes = {"i := %a; i < %b; i++",
                                           "i := %a; i > %b; i--",
                                           "i := %a; i != %b; i++",
                                           "i := %a; i <= %b; i++"};
  auto pick = [&](const std::vector<std::string> &v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  for (int round = 0; round < 300; ++round) {
    ParamEnv env;
    for (int step = 0; step < 4; ++step) {
      std::string h = pick(shapes);
      h.replace(h.find("%a"), 2, pick(exprs));
      h.replace(h.find("%b"), 2, pick(exprs));
      CAPTURE(h);
      LoopControl b = control(h);
      LookupResult r = lookup(env, b);

      // Monotone: existing bindings survive unchanged.
      CHECK(same_dom_prefix(env, r.env));
      // Integer literals never enter the map.
      for (const auto &[key, sym] : r.env.bindings())
        CHECK_FALSE(std::all_of(key.begin(), key.end(), ::isdigit));
      // Idempotent on the map; bounds are stable for recognized loops.
      LookupResult again = lookup(r.env, b);
      if (r.recognized) {
        CHECK(again.env == r.env);
        CHECK(again.lower == r.lower);
        CHECK(again.upper == r.upper);
        CHECK(again.issued.empty());
      } else {
        CHECK(again.env == r.env);
        CHECK(r.env == env);
      }
      // Every issued symbol name is new.
      std::set<std::string> names;
      for (const auto &[key, sym] : env.bindings())
        names.insert(sym.name);
      for (const ParamSymbol &s : r.issued)
        CHECK(names.insert(s.name).second);
      env = r.env;
      env.adopt_counters(again.env);
    }
  }
}

namespace {

// Reference reachability: does any function reachable from `body` by
// calls contain a go statement?
bool spawns_reference(const Program &p, const StmtList &body) {
  std::set<std::string> seen;
  std::vector<const StmtList *> todo{&body};
  while (!todo.empty()) {
    const StmtList *b = todo.back();
    todo.pop_back();
    bool found = false;
    for_each_stmt(*b, [&](const Stmt &s) {
      if (s.as<Go>())
        found = true;
      if (const Call *c = s.as<Call>()) {
        const FuncDecl *d = p.find(c->callee);
        if (d && seen.insert(d->name).second)
          todo.push_back(&d->body);
      }
    });
    if (found)
      return true;
  }
  return false;
}

} // namespace

TEST_CASE("spawns agrees with a reachability reference on random call graphs") {
  std::mt19937 rng(11);
  for (int round = 0; round < 200; ++round) {
    int n = 2 + static_cast<int>(rng() % 5);
    std::string src;
    for (int f = 0; f < n; ++f) {
      src += "func f" + std::to_string(f) + "() {\n";
      int stmts = static_cast<int>(rng() % 4);
      for (int k = 0; k < stmts; ++k) {
        int target = static_cast<int>(rng() % n);
        switch (rng() % 4) {
        case 0:
          src += "  f" + std::to_string(target) + "()\n";
          break;
        case 1:
          src += "  if x {\n    f" + std::to_string(target) + "()\n  }\n";
          break;
        case 2:
          if (rng() % 3 == 0)
            src += "  go f" + std::to_string(target) + "()\n";
          break;
        default:
          src += "  fmt.Println(1)\n";
        }
      }
      src += "}\n";
    }
    CAPTURE(src);
    Program p = parse_program(src);
    for (const auto &d : p.decls)
      CHECK(spawns(d->body, p) == spawns_reference(p, d->body));
  }
}

TEST_CASE("spawns rejects unknown callees unless lenient") {
  Program p = parse_program("func main() {\n  helper()\n  fmt.Println(len(x))\n}\n");
  CHECK_THROWS_AS(spawns(p.decls[0]->body, p), ModelError);
  CHECK_FALSE(spawns(p.decls[0]->body, p, true));
  Program q = parse_program("func main() {\n  fmt.Println(len(x))\n}\n");
  CHECK_FALSE(spawns(q.decls[0]->body, q));
}

TEST_CASE("file processing: symbol first seen at the make, reused by both loops") {
  Program p = parse_file(std::string(MINIGO_CORPUS_DIR) + "/file_processing.go");
  auto entries = partition_program(p);
  REQUIRE(entries.size() == 1);
  BehaviouralModel m = build_model(*entries[0], p);
  REQUIRE(m.free_params.size() == 1);
  const ParamSymbol &s = m.free_params[0];
  CHECK(s.name == "len_files_0");
  CHECK(s.role == ParamSymbol::Role::Capacity);
  CHECK(s.source == "len(files)");

  const MakeChan *mk = nullptr;
  for (const Stmt &st : entries[0]->body)
    if ((mk = st.as<MakeChan>()))
      break;
  REQUIRE(mk != nullptr);
  CHECK(s.origin == mk->capacity.loc);

  REQUIRE(m.channels.size() == 1);
  CHECK(m.channels[0].capacity == ParamRef::named("len_files_0"));
  std::vector<const BoundedFor *> loops;
  for (const IRStmt &st : m.entry.body)
    if (const BoundedFor *f = st.as<BoundedFor>())
      loops.push_back(f);
  REQUIRE(loops.size() == 2);
  for (const BoundedFor *f : loops) {
    CHECK(f->from == ParamRef::literal(0));
    CHECK(f->to == ParamRef::named("len_files_0"));
  }
}
