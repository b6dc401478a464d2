#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "minigo/driver.hpp"

namespace {

constexpr int kClean = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bounded verification of channel safety, global deadlocks and "
               "goroutine leaks in MiniGo programs."};
  app.name("minigo-verify");

  minigo::RunConfig cfg;
  std::vector<std::string> bound_flags;
  std::optional<std::int64_t> default_bound;
  std::optional<std::size_t> state_cap;
  std::string promela_dir;

  app.add_option("files", cfg.inputs, "MiniGo source files")->required();
  app.add_option("--bound", bound_flags, "Parameter value, NAME=INT (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--default-bound", default_bound,
                 "Value for parameters without an explicit bound")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--emit-promela", promela_dir,
                 "Write one Promela file per partition into DIR");
  app.add_flag("--json", cfg.json_output, "Print the report as JSON");
  app.add_flag("--strict", cfg.strict_assumptions,
               "Fail when an input violates a modelling assumption");
  app.add_flag("--stop-on-first", cfg.stop_on_first_violation,
               "Stop each partition's search at its first violation");
  app.add_flag("--exhaustive", cfg.exhaustive,
               "Keep searching after a channel-safety violation");
  app.add_option("--max-procs", cfg.process_cap, "Maximum live processes")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-states", state_cap, "Maximum states per partition")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "Partitions checked in parallel")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (const char *env = std::getenv("MINIGO_VERIFY_BOUNDS"))
      cfg.bounds = minigo::parse_bound_list(env);
    for (const std::string &flag : bound_flags)
      for (const auto &[name, value] : minigo::parse_bound_list(flag))
        cfg.bounds[name] = value;
    cfg.default_bound = default_bound;
    cfg.state_cap = state_cap;
    if (!promela_dir.empty())
      cfg.emit_promela_dir = promela_dir;

    minigo::Report report = minigo::run_analysis(cfg);
    std::cout << minigo::render_report(report, cfg.json_output);
    return report.any_violation() ? kViolation : kClean;
  } catch (const std::exception &e) {
    std::cerr << "minigo-verify: " << e.what() << "\n";
    return kConfigError;
  }
}
