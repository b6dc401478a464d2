#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "minigo/driver.hpp"

using namespace minigo;

namespace {

std::string corpus(const std::string &file) {
  return std::string(MINIGO_CORPUS_DIR) + "/" + file;
}

std::vector<std::string> all_corpus() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(MINIGO_CORPUS_DIR))
    if (e.path().extension() == ".go")
      out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

Report without_timings(Report r) {
  for (PartitionReport &p : r.partitions)
    p.extract_millis = p.check_millis = 0;
  r.totals.extract_millis = r.totals.check_millis = 0;
  return r;
}

} // namespace

TEST_CASE("parse_bound_list") {
  auto b = parse_bound_list("a=1, b_2=30,,c=0");
  CHECK(b == std::map<std::string, std::int64_t>{{"a", 1}, {"b_2", 30}, {"c", 0}});
  CHECK(parse_bound_list("").empty());
  for (const char *bad : {"a", "=3", "a=", "a=x", "a=3x", "a=-1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_bound_list(bad), Error);
  }
}

TEST_CASE("unresolved bounds list each symbol with its origin") {
  RunConfig cfg;
  cfg.inputs = {corpus("file_processing.go"), corpus("prod_cons_param.go")};
  try {
    run_analysis(cfg);
    FAIL("expected UnresolvedBounds");
  } catch (const UnresolvedBounds &e) {
    REQUIRE(e.entries().size() == 4);
    CHECK(e.entries()[0].symbol == "len_files_0");
    CHECK(e.entries()[0].origin == corpus("file_processing.go") + ":11:22");
    CHECK(e.entries()[0].role == "capacity");
    CHECK(e.entries()[0].source == "len(files)");
    CHECK(e.entries()[1].symbol == "k_0");
    std::string what = e.what();
    CHECK(what.find("len_files_0 (capacity at " + corpus("file_processing.go") +
                    ":11:22, len(files))") != std::string::npos);
  }
  cfg.bounds = {{"len_files_0", 2}, {"k_0", 1}};
  try {
    run_analysis(cfg);
    FAIL("expected UnresolvedBounds");
  } catch (const UnresolvedBounds &e) {
    REQUIRE(e.entries().size() == 2);
    CHECK(e.entries()[0].symbol == "n_0");
    CHECK(e.entries()[1].symbol == "m_0");
  }
}

TEST_CASE("explicit bounds override the default") {
  RunConfig cfg;
  cfg.inputs = {corpus("prod_cons_param.go")};
  cfg.default_bound = 1;
  cfg.bounds = {{"n_0", 3}};
  Report r = run_analysis(cfg);
  REQUIRE(r.partitions.size() == 1);
  std::map<std::string, std::int64_t> applied;
  for (const AppliedParam &p : r.partitions[0].free_params)
    applied[p.name] = p.value;
  CHECK(applied == std::map<std::string, std::int64_t>{{"k_0", 1}, {"n_0", 3}, {"m_0", 1}});
}

TEST_CASE("report for a clean and a violating input") {
  RunConfig cfg;
  cfg.inputs = {corpus("file_processing.go"), corpus("double_close.go")};
  cfg.default_bound = 3;
  Report r = run_analysis(cfg);
  REQUIRE(r.partitions.size() == 2);
  CHECK(r.partitions[0].clean());
  CHECK(r.partitions[0].trace.empty());
  CHECK(r.partitions[0].trace_kind == "none");
  CHECK_FALSE(r.partitions[1].channel_safe);
  CHECK(r.partitions[1].trace_kind == "channel-safety");
  std::size_t closes = 0;
  for (const TraceEvent &e : r.partitions[1].trace)
    closes += e.action == "close";
  CHECK(closes == 2);
  CHECK(r.totals.partitions == 2);
  CHECK(r.totals.violations == 1);
  CHECK(r.any_violation());
  CHECK(r.totals.states_explored ==
        r.partitions[0].states_explored + r.partitions[1].states_explored);

  std::string text = render_report(r, false);
  CHECK(text.find("file_processing.go") != std::string::npos);
  CHECK(text.find("✗") != std::string::npos);
  CHECK(text.find("len_files_0 = 3") != std::string::npos);
  CHECK(text.find("close") != std::string::npos);
}

TEST_CASE("JSON report round-trips over the corpus") {
  RunConfig cfg;
  cfg.inputs = all_corpus();
  cfg.default_bound = 2;
  Report r = run_analysis(cfg);
  CHECK(r.partitions.size() >= 17);
  std::string json = report_to_json(r);
  CHECK(json.find(kReportSchema) != std::string::npos);
  Report back = report_from_json(json);
  CHECK(back == r);
  CHECK(report_to_json(back) == json);
  CHECK(render_report(r, true) == json + "\n");
}

TEST_CASE("malformed JSON and unknown schemas are rejected") {
  CHECK_THROWS_AS(report_from_json("{"), Error);
  CHECK_THROWS_AS(report_from_json("{\"schema\": \"other\"}"), Error);
  CHECK_THROWS_AS(report_from_json("[]"), Error);
}

TEST_CASE("parallel jobs give the same report") {
  RunConfig cfg;
  cfg.inputs = all_corpus();
  cfg.default_bound = 2;
  Report one = run_analysis(cfg);
  cfg.jobs = 4;
  Report four = run_analysis(cfg);
  CHECK(without_timings(one) == without_timings(four));
}

TEST_CASE("Promela files are written per partition") {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "minigo_driver_pml";
  std::filesystem::remove_all(dir);
  RunConfig cfg;
  cfg.inputs = {corpus("file_processing.go"), corpus("mismatch.go")};
  cfg.default_bound = 2;
  cfg.emit_promela_dir = dir.string();
  Report r = run_analysis(cfg);
  REQUIRE(r.partitions.size() == 3);
  CHECK(r.partitions[0].promela_file == (dir / "main_0.pml").string());
  for (std::size_t i = 0; i < r.partitions.size(); ++i) {
    CAPTURE(i);
    std::filesystem::path f(r.partitions[i].promela_file);
    CHECK(f.filename().string() == r.partitions[i].name + "_" + std::to_string(i) + ".pml");
    CHECK(std::filesystem::file_size(f) > 0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("assumption violations warn, or fail when strict") {
  std::filesystem::path f = std::filesystem::temp_directory_path() / "minigo_dup.go";
  {
    std::ofstream out(f);
    out << "func main() {\n  c := make(chan int, 1)\n  c := make(chan int, 1)\n  c <- 1\n}\n";
  }
  RunConfig cfg;
  cfg.inputs = {f.string()};
  Report r = run_analysis(cfg);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("more than once") != std::string::npos);
  cfg.strict_assumptions = true;
  CHECK_THROWS_AS(run_analysis(cfg), AssumptionError);
  std::filesystem::remove(f);
}

TEST_CASE("state cap marks the search incomplete without a violation") {
  RunConfig cfg;
  cfg.inputs = {corpus("prod_cons_param.go")};
  cfg.default_bound = 2;
  cfg.state_cap = 20;
  Report r = run_analysis(cfg);
  REQUIRE(r.partitions.size() == 1);
  CHECK(r.partitions[0].resource_bound_hit);
  CHECK_FALSE(r.any_violation());
}
