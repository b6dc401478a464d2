#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minigo/builder.hpp"
#include "minigo/checker.hpp"
#include "minigo/driver.hpp"
#include "minigo/errors.hpp"
#include "minigo/parser.hpp"
#include "minigo/promela.hpp"
#include "minigo/validate.hpp"

namespace py = pybind11;
using namespace minigo;

namespace {

struct PyProgram {
  std::shared_ptr<Program> program;

  std::vector<std::string> entries() const {
    std::vector<std::string> out;
    for (const FuncDecl *d : partition_program(*program))
      out.push_back(d->name);
    return out;
  }
};

Bounds make_bounds(const std::map<std::string, std::int64_t> &values,
                   std::size_t max_procs, std::optional<std::size_t> max_states) {
  Bounds b;
  b.values = values;
  b.process_cap = max_procs;
  b.state_cap = max_states;
  return b;
}

py::dict event_dict(const TraceEvent &e) {
  py::dict d;
  d["proc"] = e.proc;
  d["proc_name"] = e.proc_name;
  d["action"] = e.action;
  d["channel"] = e.channel;
  d["detail"] = e.detail;
  d["loc"] = e.loc.str();
  return d;
}

py::dict verdict_dict(const Verdict &v) {
  py::dict d;
  d["channel_safe"] = v.channel_safe;
  d["global_deadlock_free"] = v.global_deadlock_free;
  d["leaks"] = v.leaks;
  d["states_explored"] = v.states_explored;
  d["resource_bound_hit"] = v.resource_bound_hit;
  d["aborted"] = v.aborted;
  d["trace_kind"] = to_string(v.trace_kind);
  py::list trace;
  for (const TraceEvent &e : v.trace)
    trace.append(event_dict(e));
  d["trace"] = trace;
  return d;
}

py::list params_list(const BehaviouralModel &m) {
  py::list out;
  for (const ParamSymbol &s : m.free_params) {
    py::dict d;
    d["name"] = s.name;
    d["role"] = to_string(s.role);
    d["origin"] = s.origin.str();
    d["source"] = s.source;
    out.append(d);
  }
  return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bounded verification of MiniGo programs.";

  py::register_exception<Error>(m, "MinigoError");
  py::register_exception<ParseError>(m, "ParseError", m.attr("MinigoError"));
  py::register_exception<ModelError>(m, "ModelError", m.attr("MinigoError"));
  py::register_exception<MissingBound>(m, "MissingBound", m.attr("MinigoError"));
  py::register_exception<UnresolvedBounds>(m, "UnresolvedBounds", m.attr("MinigoError"));
  py::register_exception<AssumptionError>(m, "AssumptionError", m.attr("MinigoError"));

  py::class_<PyProgram>(m, "Program")
      .def_property_readonly("file", [](const PyProgram &p) { return p.program->file; })
      .def("entries", &PyProgram::entries,
           "Names of the declarations checked as independent models.")
      .def("source", [](const PyProgram &p) { return print_program(*p.program); })
      .def("assumption_violations", [](const PyProgram &p) {
        std::vector<std::string> out;
        for (const Violation &v : validate_assumptions(*p.program))
          out.push_back(v.describe());
        return out;
      });

  py::class_<BehaviouralModel>(m, "Model")
      .def_readonly("name", &BehaviouralModel::name)
      .def_readonly("file", &BehaviouralModel::file)
      .def_property_readonly("free_params", &params_list)
      .def_property_readonly("processes",
                             [](const BehaviouralModel &mod) {
                               std::vector<std::string> out;
                               for (const ProcDef &p : mod.procs)
                                 out.push_back(p.name);
                               return out;
                             })
      .def("text", [](const BehaviouralModel &mod) { return to_text(mod); })
      .def("__repr__", [](const BehaviouralModel &mod) {
        return "<Model " + mod.name + " from " + mod.file + ">";
      });

  m.def(
      "parse",
      [](const std::string &source, const std::string &file) {
        return PyProgram{std::make_shared<Program>(parse_program(source, file))};
      },
      py::arg("source"), py::arg("file") = "<input>");
  m.def(
      "parse_file",
      [](const std::string &path) {
        return PyProgram{std::make_shared<Program>(parse_file(path))};
      },
      py::arg("path"));

  m.def(
      "build",
      [](const PyProgram &p, const std::string &entry) {
        const FuncDecl *d = p.program->find(entry);
        if (!d)
          throw Error("no declaration named '" + entry + "'");
        return build_model(*d, *p.program);
      },
      py::arg("program"), py::arg("entry") = "main");

  m.def(
      "check",
      [](const BehaviouralModel &model, const std::map<std::string, std::int64_t> &bounds,
         bool exhaustive, bool stop_on_first, std::size_t max_procs,
         std::optional<std::size_t> max_states) {
        ExploreOptions o;
        o.exhaustive = exhaustive;
        o.stop_on_first = stop_on_first;
        Bounds b = make_bounds(bounds, max_procs, max_states);
        Verdict v;
        {
          py::gil_scoped_release release;
          v = explore(model, b, o);
        }
        return verdict_dict(v);
      },
      py::arg("model"), py::arg("bounds") = std::map<std::string, std::int64_t>{},
      py::arg("exhaustive") = false, py::arg("stop_on_first") = false,
      py::arg("max_procs") = 256, py::arg("max_states") = std::nullopt);

  m.def(
      "emit_promela",
      [](const BehaviouralModel &model, const std::map<std::string, std::int64_t> &bounds) {
        Bounds b;
        b.values = bounds;
        return emit_model(model, b);
      },
      py::arg("model"), py::arg("bounds") = std::map<std::string, std::int64_t>{});

  m.def(
      "analyze_json",
      [](const std::vector<std::string> &files,
         const std::map<std::string, std::int64_t> &bounds,
         std::optional<std::int64_t> default_bound, std::optional<std::string> emit_promela_dir,
         bool strict, bool stop_on_first, bool exhaustive, std::size_t max_procs,
         std::optional<std::size_t> max_states, unsigned jobs) {
        RunConfig cfg;
        cfg.inputs = files;
        cfg.bounds = bounds;
        cfg.default_bound = default_bound;
        cfg.emit_promela_dir = emit_promela_dir;
        cfg.strict_assumptions = strict;
        cfg.stop_on_first_violation = stop_on_first;
        cfg.exhaustive = exhaustive;
        cfg.process_cap = max_procs;
        cfg.state_cap = max_states;
        cfg.jobs = jobs;
        Report r;
        {
          py::gil_scoped_release release;
          r = run_analysis(cfg);
        }
        return report_to_json(r);
      },
      py::arg("files"), py::arg("bounds") = std::map<std::string, std::int64_t>{},
      py::arg("default_bound") = std::nullopt, py::arg("emit_promela_dir") = std::nullopt,
      py::arg("strict") = false, py::arg("stop_on_first") = false,
      py::arg("exhaustive") = false, py::arg("max_procs") = 256,
      py::arg("max_states") = std::nullopt, py::arg("jobs") = 1);

  m.def(
      "render_report",
      [](const std::string &json, bool as_json) {
        return render_report(report_from_json(json), as_json);
      },
      py::arg("report_json"), py::arg("as_json") = false);

  m.attr("REPORT_SCHEMA") = kReportSchema;
}
