#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "minigo/builder.hpp"
#include "minigo/errors.hpp"
#include "minigo/parser.hpp"
#include "minigo/promela.hpp"

using namespace minigo;

namespace {

struct Loaded {
  Program program;
  std::vector<BehaviouralModel> models;
};

Loaded load(const std::string &file) {
  Loaded l{parse_file(std::string(MINIGO_CORPUS_DIR) + "/" + file), {}};
  for (const FuncDecl *e : partition_program(l.program))
    l.models.push_back(build_model(*e, l.program));
  return l;
}

Bounds uniform(const BehaviouralModel &m, std::int64_t v) {
  Bounds b;
  for (const ParamSymbol &s : m.free_params)
    b.values[s.name] = v;
  return b;
}

std::string read(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string &text, const std::string &pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(
      std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

} // namespace

TEST_CASE("file processing at 15 matches the golden file") {
  Loaded l = load("file_processing.go");
  REQUIRE(l.models.size() == 1);
  std::string text = emit_model(l.models[0], uniform(l.models[0], 15));
  CHECK(text == read(std::string(MINIGO_TESTS_DIR) + "/golden/file_processing_15.pml"));
}

TEST_CASE("file processing: processes, capacity and loop ranges follow the bound") {
  for (std::int64_t v : {1, 3, 15}) {
    CAPTURE(v);
    Loaded l = load("file_processing.go");
    std::string t = emit_model(l.models[0], uniform(l.models[0], v));
    CHECK(count(t, R"(proctype chanMonitor\(Chandef ch\))") == 1);
    CHECK(count(t, R"(proctype go_worker\(Chandef results\))") == 1);
    CHECK(count(t, R"(\ninit \{)") == 1);
    CHECK(count(t, "int len_files_0 = " + std::to_string(v) + ";") == 1);
    CHECK(count(t, R"(chan a_in = \[)" + std::to_string(v) + R"(\] of \{int\})") == 1);
    CHECK(count(t, "0 \\.\\. " + std::to_string(v - 1) + " ") == 2);
    CHECK(count(t, R"(run chanMonitor\(a\);)") == 1);
    CHECK(count(t, R"(run go_worker\(a\);)") == 1);
    CHECK(count(t, R"(assert\(false\))") == 2);
    CHECK(count(t, R"(a\.closing\?state;)") == 1);
    CHECK(count(t, R"(results\.in!0;\n  results\.sending\?state;)") == 1);
  }
}

TEST_CASE("emission is byte-stable") {
  Loaded a = load("file_processing.go");
  Loaded b = load("file_processing.go");
  std::string first = emit_model(a.models[0], uniform(a.models[0], 15));
  CHECK(first == emit_model(a.models[0], uniform(a.models[0], 15)));
  CHECK(first == emit_model(b.models[0], uniform(b.models[0], 15)));
}

TEST_CASE("missing bound is reported by name") {
  Loaded l = load("file_processing.go");
  try {
    emit_model(l.models[0], {});
    FAIL("expected MissingBound");
  } catch (const MissingBound &e) {
    CHECK(e.symbol() == "len_files_0");
  }
}

TEST_CASE("NDLoop becomes a do block with a true-guarded break") {
  Program p = parse_program("func main() {\n  c := make(chan int)\n"
                            "  for i := 0; i < n; i++ {\n    <-c\n  }\n}\n");
  BehaviouralModel m = build_model(*p.find("main"), p);
  std::string t = emit_model(m, {});
  CHECK(count(t, R"(do\n  :: true ->\n    c\.in\?0;\n  :: true -> break\n  od;)") == 1);
  // Nothing is monitored, so no monitor proctype.
  CHECK(count(t, "chanMonitor") == 0);
}

TEST_CASE("blocking calls wait on a completion channel") {
  Program p = parse_program("func w(a chan int) {\n  a <- 1\n}\n"
                            "func main() {\n  c := make(chan int, 1)\n  w(c)\n  <-c\n}\n");
  BehaviouralModel m = build_model(*p.find("main"), p);
  std::string t = emit_model(m, {});
  CHECK(count(t, R"(proctype w\(Chandef a; chan child\))") == 1);
  CHECK(count(t, R"(run w\(c, child_w\);\n  child_w\?0;)") == 1);
  CHECK(count(t, R"(child!0;)") == 1);
}

TEST_CASE("promela file names use the entry and its index") {
  Loaded l = load("file_processing.go");
  CHECK(promela_file_name(l.models[0], 0) == "main_0.pml");
  CHECK(promela_file_name(l.models[0], 7) == "main_7.pml");
}

TEST_CASE("every corpus model gives balanced Promela") {
  for (const auto &e : std::filesystem::directory_iterator(MINIGO_CORPUS_DIR)) {
    if (e.path().extension() != ".go")
      continue;
    Loaded l = load(e.path().filename().string());
    for (const BehaviouralModel &m : l.models) {
      CAPTURE(e.path().string());
      CAPTURE(m.name);
      std::string t = emit_model(m, uniform(m, 2));
      CHECK(count(t, R"(\{)") == count(t, R"(\})"));
      CHECK(count(t, R"(\bdo\b)") == count(t, R"(\bod\b)"));
      CHECK(count(t, R"(\bif\b)") == count(t, R"(\bfi\b)"));
      CHECK(count(t, R"(\ninit \{)") == 1);
      // Outside declarations and comments, bounds appear as numbers only.
      std::string code = std::regex_replace(t, std::regex(R"(/\*[^*]*\*/|//[^\n]*)"), "");
      for (const ParamSymbol &s : m.free_params) {
        CHECK(count(t, "\nint " + s.name + " = 2; //") == 1);
        CHECK(count(code, R"(\b)" + s.name + R"(\b)") == 1);
      }
    }
  }
}
