#include "minigo/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "minigo/builder.hpp"
#include "minigo/parser.hpp"
#include "minigo/promela.hpp"
#include "minigo/validate.hpp"

namespace minigo {

const char *const kReportSchema = "minigo-verify/report/v1";

namespace {

std::string describe_entries(const std::vector<UnresolvedBounds::Entry> &entries) {
  std::string msg = "unresolved bounds:";
  for (const auto &e : entries) {
    msg += "\n  " + e.symbol + " (" + e.role + " at " + e.origin;
    if (!e.source.empty())
      msg += ", " + e.source;
    msg += ")";
  }
  return msg;
}

double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

struct WorkItem {
  std::string file;
  BehaviouralModel model;
  double extract_millis = 0;
  Bounds bounds;
  std::vector<AppliedParam> params;
};

bool same_loc(const SourceLoc &a, const SourceLoc &b) { return a == b; }

} // namespace

UnresolvedBounds::UnresolvedBounds(std::vector<Entry> entries)
    : Error(describe_entries(entries)), entries_(std::move(entries)) {}

bool PartitionReport::operator==(const PartitionReport &o) const {
  if (trace.size() != o.trace.size())
    return false;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (!(trace[i] == o.trace[i]) || !same_loc(trace[i].loc, o.trace[i].loc))
      return false;
  return file == o.file && name == o.name && states_explored == o.states_explored &&
         channel_safe == o.channel_safe &&
         global_deadlock_free == o.global_deadlock_free && leaks == o.leaks &&
         resource_bound_hit == o.resource_bound_hit && aborted == o.aborted &&
         extract_millis == o.extract_millis && check_millis == o.check_millis &&
         free_params == o.free_params && trace_kind == o.trace_kind &&
         promela_file == o.promela_file;
}

std::map<std::string, std::int64_t> parse_bound_list(const std::string &text) {
  std::map<std::string, std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty())
      continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error("malformed bound '" + item + "', expected NAME=INT");
    std::string name = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw Error("malformed bound '" + item + "', expected NAME=INT");
    if (v < 0)
      throw Error("bound '" + name + "' must not be negative");
    out[name] = v;
  }
  return out;
}

Report run_analysis(const RunConfig &cfg) {
  Report report;
  std::vector<WorkItem> work;

  for (const std::string &path : cfg.inputs) {
    Program program = parse_file(path);
    std::vector<Violation> violations = validate_assumptions(program);
    if (!violations.empty()) {
      if (cfg.strict_assumptions) {
        std::string msg = path + ": modelling assumptions violated:";
        for (const Violation &v : violations)
          msg += "\n  " + v.describe();
        throw AssumptionError(msg);
      }
      for (const Violation &v : violations)
        report.warnings.push_back(path + ": " + v.describe());
    }
    for (const FuncDecl *entry : partition_program(program)) {
      auto t0 = std::chrono::steady_clock::now();
      BehaviouralModel model = build_model(*entry, program);
      WorkItem item{path, std::move(model), millis_since(t0), {}, {}};
      work.push_back(std::move(item));
    }
  }

  std::vector<UnresolvedBounds::Entry> unresolved;
  for (WorkItem &item : work) {
    item.bounds.process_cap = cfg.process_cap;
    item.bounds.state_cap = cfg.state_cap;
    for (const ParamSymbol &p : item.model.free_params) {
      std::optional<std::int64_t> value;
      if (auto it = cfg.bounds.find(p.name); it != cfg.bounds.end())
        value = it->second;
      else if (cfg.default_bound)
        value = cfg.default_bound;
      if (!value) {
        unresolved.push_back({p.name, p.origin.str(), to_string(p.role), p.source});
        continue;
      }
      if (*value < 0)
        throw Error("bound '" + p.name + "' must not be negative");
      item.bounds.values[p.name] = *value;
      item.params.push_back(
          {p.name, *value, p.origin.str(), to_string(p.role), p.source});
    }
  }
  if (!unresolved.empty())
    throw UnresolvedBounds(std::move(unresolved));

  report.partitions.resize(work.size());
  ExploreOptions options;
  options.exhaustive = cfg.exhaustive;
  options.stop_on_first = cfg.stop_on_first_violation;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size())
        return;
      try {
        const WorkItem &item = work[i];
        auto t0 = std::chrono::steady_clock::now();
        Verdict v = explore(item.model, item.bounds, options);
        PartitionReport &r = report.partitions[i];
        r.check_millis = millis_since(t0);
        r.file = item.file;
        r.name = item.model.name;
        r.states_explored = v.states_explored;
        r.channel_safe = v.channel_safe;
        r.global_deadlock_free = v.global_deadlock_free;
        r.leaks = v.leaks;
        r.resource_bound_hit = v.resource_bound_hit;
        r.aborted = v.aborted;
        r.extract_millis = item.extract_millis;
        r.free_params = item.params;
        r.trace_kind = to_string(v.trace_kind);
        r.trace = std::move(v.trace);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = work.size();
      }
    }
  };
  unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(
                                                                std::max<std::size_t>(1, work.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back(worker);
    for (std::thread &t : pool)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);

  if (cfg.emit_promela_dir) {
    std::filesystem::path dir(*cfg.emit_promela_dir);
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < work.size(); ++i) {
      std::filesystem::path file = dir / promela_file_name(work[i].model, i);
      std::ofstream out(file, std::ios::binary);
      out << emit_model(work[i].model, work[i].bounds);
      if (!out)
        throw Error("cannot write " + file.string());
      report.partitions[i].promela_file = file.string();
    }
  }

  for (const PartitionReport &r : report.partitions) {
    ++report.totals.partitions;
    if (!r.clean())
      ++report.totals.violations;
    report.totals.states_explored += r.states_explored;
    report.totals.extract_millis += r.extract_millis;
    report.totals.check_millis += r.check_millis;
  }
  return report;
}

namespace {

std::size_t display_width(const std::string &s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80)
      ++n;
  return n;
}

std::string mark(bool ok) { return ok ? "✓" : "✗"; }

std::string fixed(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

} // namespace

std::string render_report(const Report &report, bool json) {
  if (json)
    return report_to_json(report) + "\n";

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"FILE", "PARTITION", "STATES", "CS", "GD", "LEAK", "EXTRACT(ms)",
                  "CHECK(ms)", "NOTE"});
  for (const PartitionReport &r : report.partitions) {
    std::string note;
    if (r.resource_bound_hit)
      note = "incomplete";
    if (r.aborted)
      note += note.empty() ? "stopped at violation" : ", stopped at violation";
    rows.push_back({r.file, r.name, std::to_string(r.states_explored),
                    mark(r.channel_safe), mark(r.global_deadlock_free),
                    mark(!r.leaks), fixed(r.extract_millis), fixed(r.check_millis),
                    note});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto &row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], display_width(row[c]));

  std::ostringstream out;
  for (const auto &row : rows) {
    std::string text;
    for (std::size_t c = 0; c < row.size(); ++c) {
      bool numeric = c == 2 || c == 6 || c == 7;
      std::string pad(width[c] - display_width(row[c]), ' ');
      text += numeric ? pad + row[c] : row[c] + pad;
      if (c + 1 < row.size())
        text += "  ";
    }
    text.erase(text.find_last_not_of(' ') + 1);
    out << text << "\n";
  }

  for (const PartitionReport &r : report.partitions) {
    if (r.free_params.empty())
      continue;
    out << "\nparameters of " << r.name << " (" << r.file << "):\n";
    for (const AppliedParam &p : r.free_params) {
      out << "  " << p.name << " = " << p.value << "  (" << p.role << " at "
          << p.origin;
      if (!p.source.empty())
        out << ", " << p.source;
      out << ")\n";
    }
  }

  for (const PartitionReport &r : report.partitions) {
    if (r.trace_kind == "none")
      continue;
    out << "\n" << r.trace_kind << " trace for " << r.name << " (" << r.file
        << "):\n";
    std::size_t step = 1;
    for (const TraceEvent &e : r.trace) {
      out << "  " << std::setw(3) << step++ << ". " << e.proc_name << "#" << e.proc
          << " " << e.action;
      if (!e.channel.empty())
        out << " " << e.channel;
      if (!e.detail.empty())
        out << " [" << e.detail << "]";
      out << "  at " << e.loc.str() << "\n";
    }
  }

  for (const std::string &w : report.warnings)
    out << "\nwarning: " << w << "\n";

  out << "\n"
      << report.totals.partitions << " partition(s), " << report.totals.violations
      << " with violations, " << report.totals.states_explored
      << " states, extract " << fixed(report.totals.extract_millis) << " ms, check "
      << fixed(report.totals.check_millis) << " ms\n";
  return out.str();
}

namespace {

using nlohmann::json;

json loc_to_json(const SourceLoc &loc) {
  return json{{"file", loc.file_name()}, {"line", loc.line}, {"column", loc.column}};
}

SourceLoc loc_from_json(const json &j) {
  SourceLoc loc;
  loc.file = std::make_shared<const std::string>(j.at("file").get<std::string>());
  loc.line = j.at("line").get<int>();
  loc.column = j.at("column").get<int>();
  return loc;
}

} // namespace

std::string report_to_json(const Report &report) {
  json parts = json::array();
  for (const PartitionReport &r : report.partitions) {
    json params = json::array();
    for (const AppliedParam &p : r.free_params)
      params.push_back({{"name", p.name},
                        {"value", p.value},
                        {"origin", p.origin},
                        {"role", p.role},
                        {"source", p.source}});
    json trace = json::array();
    for (const TraceEvent &e : r.trace)
      trace.push_back({{"proc", e.proc},
                       {"procName", e.proc_name},
                       {"action", e.action},
                       {"channel", e.channel},
                       {"detail", e.detail},
                       {"location", loc_to_json(e.loc)}});
    parts.push_back({{"file", r.file},
                     {"name", r.name},
                     {"statesExplored", r.states_explored},
                     {"channelSafe", r.channel_safe},
                     {"globalDeadlockFree", r.global_deadlock_free},
                     {"leaks", r.leaks},
                     {"resourceBoundHit", r.resource_bound_hit},
                     {"aborted", r.aborted},
                     {"extractMillis", r.extract_millis},
                     {"checkMillis", r.check_millis},
                     {"freeParams", params},
                     {"traceKind", r.trace_kind},
                     {"trace", trace},
                     {"promelaFile", r.promela_file}});
  }
  json doc{{"schema", kReportSchema},
           {"partitions", parts},
           {"warnings", report.warnings},
           {"totals",
            {{"partitions", report.totals.partitions},
             {"violations", report.totals.violations},
             {"statesExplored", report.totals.states_explored},
             {"extractMillis", report.totals.extract_millis},
             {"checkMillis", report.totals.check_millis}}}};
  return doc.dump(2);
}

Report report_from_json(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  try {
    if (doc.at("schema").get<std::string>() != kReportSchema)
      throw Error("unknown report schema '" + doc.at("schema").get<std::string>() +
                  "'");
    Report report;
    for (const json &p : doc.at("partitions")) {
      PartitionReport r;
      r.file = p.at("file").get<std::string>();
      r.name = p.at("name").get<std::string>();
      r.states_explored = p.at("statesExplored").get<std::size_t>();
      r.channel_safe = p.at("channelSafe").get<bool>();
      r.global_deadlock_free = p.at("globalDeadlockFree").get<bool>();
      r.leaks = p.at("leaks").get<bool>();
      r.resource_bound_hit = p.at("resourceBoundHit").get<bool>();
      r.aborted = p.at("aborted").get<bool>();
      r.extract_millis = p.at("extractMillis").get<double>();
      r.check_millis = p.at("checkMillis").get<double>();
      for (const json &f : p.at("freeParams"))
        r.free_params.push_back({f.at("name").get<std::string>(),
                                 f.at("value").get<std::int64_t>(),
                                 f.at("origin").get<std::string>(),
                                 f.at("role").get<std::string>(),
                                 f.at("source").get<std::string>()});
      r.trace_kind = p.at("traceKind").get<std::string>();
      for (const json &e : p.at("trace")) {
        TraceEvent ev;
        ev.proc = e.at("proc").get<int>();
        ev.proc_name = e.at("procName").get<std::string>();
        ev.action = e.at("action").get<std::string>();
        ev.channel = e.at("channel").get<std::string>();
        ev.detail = e.at("detail").get<std::string>();
        ev.loc = loc_from_json(e.at("location"));
        r.trace.push_back(std::move(ev));
      }
      r.promela_file = p.at("promelaFile").get<std::string>();
      report.partitions.push_back(std::move(r));
    }
    report.warnings = doc.at("warnings").get<std::vector<std::string>>();
    const json &t = doc.at("totals");
    report.totals.partitions = t.at("partitions").get<std::size_t>();
    report.totals.violations = t.at("violations").get<std::size_t>();
    report.totals.states_explored = t.at("statesExplored").get<std::size_t>();
    report.totals.extract_millis = t.at("extractMillis").get<double>();
    report.totals.check_millis = t.at("checkMillis").get<double>();
    return report;
  } catch (const json::exception &e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

} // namespace minigo
