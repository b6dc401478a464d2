#include <filesystem>

#include "doctest.h"
#include "minigo/errors.hpp"
#include "minigo/lexer.hpp"
#include "minigo/parser.hpp"

using namespace minigo;

namespace {

std::string corpus(const std::string &name) {
  return std::string(MINIGO_CORPUS_DIR) + "/" + name;
}

const For *find_for(const StmtList &body, std::size_t index) {
  std::size_t seen = 0;
  for (const Stmt &s : body)
    if (const For *f = s.as<For>())
      if (seen++ == index)
        return f;
  return nullptr;
}

} // namespace

TEST_CASE("minimal make statement") {
  Program p = parse_program("func main(){ a := make(chan, 0) }");
  REQUIRE(p.decls.size() == 1);
  const FuncDecl &main = *p.decls[0];
  CHECK(main.name == "main");
  REQUIRE(main.body.size() == 1);
  const MakeChan *mk = main.body[0].as<MakeChan>();
  REQUIRE(mk != nullptr);
  CHECK(mk->chan == "a");
  CHECK(mk->capacity == Expr::int_lit(0));
}

TEST_CASE("make without capacity is synchronous") {
  Program p = parse_program("func main() {\n  c := make(chan int)\n}\n");
  const MakeChan *mk = p.decls[0]->body[0].as<MakeChan>();
  REQUIRE(mk != nullptr);
  CHECK(mk->capacity == Expr::int_lit(0));
}

TEST_CASE("malformed parameter list reports the brace") {
  try {
    parse_program("func f( {");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.loc().line == 1);
    CHECK(e.loc().column == 9);
    CHECK(e.message().find("'{'") != std::string::npos);
  }
}

TEST_CASE("file processing source") {
  Program p = parse_file(corpus("file_processing.go"));
  REQUIRE(p.decls.size() == 2);
  CHECK(p.decls[0]->name == "worker");
  CHECK(p.decls[1]->name == "main");
  const FuncDecl &main = *p.find("main");
  const MakeChan *mk = nullptr;
  for (const Stmt &s : main.body)
    if ((mk = s.as<MakeChan>()))
      break;
  REQUIRE(mk != nullptr);
  CHECK(mk->capacity.kind == Expr::Kind::Opaque);
  CHECK(mk->capacity.text == "len(files)");
  const For *spawn_loop = find_for(main.body, 0);
  const For *recv_loop = find_for(main.body, 1);
  REQUIRE(spawn_loop);
  REQUIRE(recv_loop);
  REQUIRE(spawn_loop->body.size() == 1);
  const Go *go = spawn_loop->body[0].as<Go>();
  REQUIRE(go);
  CHECK(go->call.callee == "worker");
  CHECK(spawn_loop->control.init_var == "i");
  CHECK(spawn_loop->control.op == CompareOp::Less);
  CHECK(spawn_loop->control.mutator == Mutator::Inc);
  CHECK(recv_loop->body[0].as<Recv>() != nullptr);
}

TEST_CASE("every node carries a location") {
  Program p = parse_file(corpus("file_processing.go"));
  for (const auto &d : p.decls)
    for (const Stmt &s : d->body) {
      CHECK(s.loc.line > 0);
      CHECK(s.loc.column > 0);
      CHECK(s.loc.file_name() == corpus("file_processing.go"));
    }
}

TEST_CASE("semicolon insertion") {
  auto toks = tokenize("x := 1\ny++\n", "t");
  int semis = 0;
  for (const Token &t : toks)
    semis += t.kind == Tok::Semi;
  CHECK(semis == 2);
}

TEST_CASE("function literals are lifted with captured channels") {
  Program p = parse_file(corpus("double_close.go"));
  REQUIRE(p.decls.size() == 2);
  CHECK(p.decls[0]->name == "main");
  const FuncDecl &lit = *p.decls[1];
  CHECK(lit.name == "main_func1");
  CHECK(lit.is_literal());
  CHECK(lit.captured == std::vector<std::string>{"ch"});
  const Go *go = p.decls[0]->body[1].as<Go>();
  REQUIRE(go);
  CHECK(go->call.callee == "main_func1");
  REQUIRE(go->call.args.size() == 1);
  CHECK(go->call.args[0].is_chan);
  CHECK(go->call.args[0].chan == "ch");
}

TEST_CASE("nested literals propagate captures outward") {
  Program p = parse_program(R"(
func main() {
	c := make(chan int)
	go func() {
		go func() {
			c <- 1
		}()
	}()
	<-c
}
)");
  REQUIRE(p.decls.size() == 3);
  CHECK(p.decls[1]->name == "main_func2");
  CHECK(p.decls[2]->name == "main_func1");
  CHECK(p.find("main_func1")->captured == std::vector<std::string>{"c"});
  CHECK(p.find("main_func2")->captured == std::vector<std::string>{"c"});
}

TEST_CASE("constants are inlined") {
  Program p = parse_program(R"(
const N = 4
func main() {
	const M = N
	c := make(chan int, M)
	for i := 0; i < N; i++ {
		c <- i
	}
}
)");
  const FuncDecl &main = *p.decls[0];
  const MakeChan *mk = main.body[1].as<MakeChan>();
  REQUIRE(mk);
  CHECK(mk->capacity == Expr::int_lit(4));
  const For *f = main.body[2].as<For>();
  REQUIRE(f);
  CHECK(*f->control.bound == Expr::int_lit(4));
}

TEST_CASE("unsupported constructs are rejected with a location") {
  const char *cases[] = {
      "func main() { defer f() }",
      "func main() { for { continue } }",
      "func main() {\nL:\n for {} }",
      "func main() { var c chan int }",
      "type T int",
      "var x = 1",
      "func main() { c := make(chan int); x := 1 + <-c }",
      "func main() { f := func() {} }",
      "func main() { c := make(chan int); for v := range c { } }",
      "func main() { var x interface{}; switch x.(type) {} }",
      "func main() { c <- 1 }",
  };
  for (const std::string src : cases) {
    CAPTURE(src);
    CHECK_THROWS_AS(parse_program(src), ParseError);
  }
}

TEST_CASE("opaque equality is whitespace-insensitive") {
  Program a = parse_program("func main() { c := make(chan int, len( files ) + 1) }");
  Program b = parse_program("func main() { c := make(chan int, len(files)+1) }");
  const Expr &x = a.decls[0]->body[0].as<MakeChan>()->capacity;
  const Expr &y = b.decls[0]->body[0].as<MakeChan>()->capacity;
  CHECK(x.kind == Expr::Kind::Opaque);
  CHECK(x == y);
  CHECK(y == x);
  CHECK(x == x);
}

TEST_CASE("select, switch and if forms") {
  Program p = parse_program(R"(
func main() {
	a := make(chan int)
	b := make(chan int, 1)
	select {
	case v := <-a:
		_ = v
	case b <- 2:
	default:
	}
	switch x := 3; x {
	case 1, 2:
		b <- 1
	case 3:
	}
	if n := 2; n > 1 {
		<-b
	} else if n == 0 {
	} else {
		close(a)
	}
	for k := 10; k > 0; k-- {
	}
	for p := 0; p != 3; p++ {
	}
	for a != nil {
		break
	}
	for {
		return
	}
}
)");
  const FuncDecl &main = *p.decls[0];
  const Select *sel = main.body[2].as<Select>();
  REQUIRE(sel);
  CHECK(sel->cases.size() == 2);
  CHECK(sel->default_body.has_value());
  const Switch *sw = main.body[3].as<Switch>();
  REQUIRE(sw);
  CHECK(sw->branches.size() == 2);
  CHECK(sw->default_index == -1);
  const If *iff = main.body[4].as<If>();
  REQUIRE(iff);
  CHECK(iff->init != nullptr);
  REQUIRE(iff->else_body.size() == 1);
  CHECK(iff->else_body[0].as<If>() != nullptr);
  const For *down = main.body[5].as<For>();
  CHECK(down->control.op == CompareOp::Greater);
  CHECK(down->control.mutator == Mutator::Dec);
  CHECK(main.body[6].as<For>()->control.op == CompareOp::NotEq);
  CHECK(main.body[7].as<For>()->form == For::Form::While);
  CHECK(main.body[8].as<For>()->form == For::Form::Infinite);
}

TEST_CASE("round trip over the corpus") {
  for (const auto &entry : std::filesystem::directory_iterator(MINIGO_CORPUS_DIR)) {
    if (entry.path().extension() != ".go")
      continue;
    CAPTURE(entry.path().string());
    Program p = parse_file(entry.path().string());
    std::string printed = print_program(p);
    Program q = parse_program(printed, "printed");
    CHECK(dump_ast(p) == dump_ast(q));
    CHECK(print_program(q) == printed);
  }
}
