#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "schematic/oracle.hpp"
#include "schematic/problem_io.hpp"
#include "schematic/solver.hpp"

namespace py = pybind11;
using namespace schematic;

namespace {

CycleGuard guard_of(const std::string& g) {
  if (g == "index-gap") return CycleGuard::IndexGap;
  if (g == "raw-disjoint") return CycleGuard::RawDisjoint;
  if (g == "either") return CycleGuard::Either;
  throw py::value_error("unknown cycle guard: " + g);
}

SchematicProblem parse(const std::string& text) {
  try {
    return parse_problem(text).problem;
  } catch (const ParseError& e) {
    throw py::value_error(e.what());
  } catch (const SchemaError& e) {
    throw py::value_error(e.what());
  }
}

SolveResult run(const std::string& text, std::optional<unsigned> max_iterations, const std::string& guard) {
  SolveOptions opts;
  opts.max_iterations = max_iterations;
  opts.guard = guard_of(guard);
  SchematicProblem p = parse(text);
  py::gil_scoped_release nogil;
  return u_sch_unif(p, opts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "unifiability of uniform schematic unification problems";

  m.def(
      "solve_json",
      [](const std::string& text, std::optional<unsigned> max_iterations, const std::string& guard,
         std::optional<unsigned> oracle, uint64_t node_cap) {
        SolveResult r = run(text, max_iterations, guard);
        if (!oracle) return to_json(r).dump();
        OracleReport o = bounded_check(parse(text), *oracle, node_cap);
        return to_json(r, &o).dump();
      },
      py::arg("text"), py::arg("max_iterations") = py::none(), py::arg("guard") = "index-gap",
      py::arg("oracle") = py::none(), py::arg("node_cap") = kDefaultNodeCap);

  m.def(
      "trace",
      [](const std::string& text, std::optional<unsigned> max_iterations, const std::string& guard) {
        return emit_trace(run(text, max_iterations, guard));
      },
      py::arg("text"), py::arg("max_iterations") = py::none(), py::arg("guard") = "index-gap");

  m.def(
      "oracle_json",
      [](const std::string& text, unsigned n, uint64_t node_cap) {
        return to_json(bounded_check(parse(text), n, node_cap)).dump();
      },
      py::arg("text"), py::arg("n") = kDefaultOracleDepth, py::arg("node_cap") = kDefaultNodeCap);

  m.def("exit_code", [](const std::string& text) { return exit_code(run(text, std::nullopt, "index-gap").outcome); },
        py::arg("text"));
}
