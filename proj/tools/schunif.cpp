#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "schematic/oracle.hpp"
#include "schematic/problem_io.hpp"

using namespace schematic;

int main(int argc, char** argv) {
  CLI::App app{"Decide unifiability of a uniform schematic unification problem"};
  std::string path;
  bool trace = false, json = false;
  std::optional<unsigned> oracle_n, max_iter;
  uint64_t node_cap = kDefaultNodeCap;
  app.add_option("problem", path, "problem file")->required();
  app.add_flag("--trace", trace, "print per-instance stores, substitutions and metrics");
  app.add_flag("--json", json, "print the result as JSON");
  app.add_option("--oracle", oracle_n, "also unify instances 0..N directly");
  app.add_option("--max-iterations", max_iter, "instance cap (default derived from the problem)");
  app.add_option("--oracle-node-cap", node_cap, "skip oracle instances larger than this");
  CycleGuard guard = CycleGuard::IndexGap;
  std::map<std::string, CycleGuard> guards{{"index-gap", CycleGuard::IndexGap},
                                           {"raw-disjoint", CycleGuard::RawDisjoint},
                                           {"either", CycleGuard::Either}};
  app.add_option("--cycle-guard", guard, "extra condition on cycle candidates")
      ->transform(CLI::CheckedTransformer(guards, CLI::ignore_case));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return 3;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ParsedProblem pp;
  try {
    pp = parse_problem(buf.str());
  } catch (const ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 3;
  }

  SolveResult res;
  try {
    SolveOptions opts;
    opts.max_iterations = max_iter;
    opts.guard = guard;
    res = u_sch_unif(pp.problem, opts);
  } catch (const SchemaError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 3;
  }

  std::optional<OracleReport> rep;
  if (oracle_n) rep = bounded_check(pp.problem, *oracle_n, node_cap);

  if (json) {
    std::cout << to_json(res, rep ? &*rep : nullptr).dump(2) << "\n";
  } else {
    if (trace) {
      std::cout << emit_trace(res);
    } else {
      const Outcome& o = res.outcome;
      switch (o.kind) {
        case Outcome::Kind::Cycle:
          std::cout << "unifiable: cycle i=" << o.i << " j=" << o.j << " mu=" << to_string(o.mapping)
                    << "\n";
          break;
        case Outcome::Kind::NotUnifiable:
          std::cout << "not unifiable: instance " << o.instance << " (" << to_string(o.cause) << ")\n";
          break;
        case Outcome::Kind::StabilityViolation:
          std::cout << "stability violation at instance " << o.instance << "\n";
          break;
        case Outcome::Kind::Exhausted:
          std::cout << "exhausted after " << o.cap << " instances\n";
          break;
      }
    }
    if (rep) {
      std::cout << "oracle: checked 0.." << (rep->checked_up_to ? std::to_string(*rep->checked_up_to) : "none");
      if (rep->first_failure)
        std::cout << ", first failure at " << rep->first_failure->instance << " ("
                  << to_string(rep->first_failure->cause) << ")";
      else
        std::cout << ", no failure";
      if (rep->size_capped_at) std::cout << ", size cap hit at " << *rep->size_capped_at;
      std::cout << "\n";
    }
  }
  return exit_code(res.outcome);
}
