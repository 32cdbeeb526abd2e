#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schematic/engine.hpp"
#include "schematic/schema.hpp"
#include "schematic/unify.hpp"

namespace schematic {

struct SchematicProblem {
  std::vector<Equation> equations;
  Schema schema;
};

struct InstanceRecord {
  unsigned i = 0;
  EqSet store;
  EqSet active;
  EqSet normalized_store;
  EqSet collapsed;  // normalized store under eq_sub, reflexive equations dropped
  EqSet irr;        // cumulative irrelevant set I_i
  std::set<Var> irr_vars;
  Substitution step_sub;
  Substitution eq_sub;
  std::set<Var> fr;
  long metric = 0;           // |vars(NStore sub)| - |irrV|
  long printed_metric = 0;   // |vars(U(i))| - |dom(sub)| - |irrV|
  std::optional<double> ratio;          // against the reference maximum, i >= stab
  std::optional<double> printed_ratio;
};

enum class Cause { Clash, Cycle, IrrCycle };
std::string to_string(Cause c);

struct Outcome {
  enum class Kind { Cycle, NotUnifiable, StabilityViolation, Exhausted };
  Kind kind = Kind::Exhausted;
  // Cycle
  unsigned i = 0, j = 0;
  Substitution mapping;
  EqSet store_i, store_j, irr_i;
  Substitution eq_sub_i, eq_sub_j;
  // NotUnifiable / StabilityViolation
  unsigned instance = 0;
  Cause cause = Cause::Clash;
  std::optional<Equation> culprit;
  // Exhausted
  unsigned cap = 0;
};
std::string to_string(Outcome::Kind k);

// Extra condition on a cycle candidate (i, j) beyond the map and the
// future-relevant disjointness test.
enum class CycleGuard {
  RawDisjoint,  // raw stores i and j share no variable
  IndexGap,     // i - j >= stab
  Either,
};
std::string to_string(CycleGuard g);

struct SolveOptions {
  std::optional<unsigned> max_iterations;
  CycleGuard guard = CycleGuard::IndexGap;
  std::function<void(const InstanceRecord&)> on_instance;
};

struct SolveResult {
  Outcome outcome;
  std::vector<InstanceRecord> records;
  std::optional<unsigned> stab_index;
  SchematicProblem primitive;  // after make_primitive
  Substitution sigma;          // sigma' of make_primitive
};

std::vector<Equation> instance_problem(const SchematicProblem& p, unsigned i);
Substitution step_substitution(const EqSet& store, const Schema& s);
EqSet irrelevant_set(const EqSet& store, const EqSet& active, const Schema& s);

struct ChcResult {
  bool ok = true;
  unsigned v_gap = 0;
  std::vector<Equation> unfolded;
  std::optional<Equation> culprit;
};
ChcResult cycle_check(const EqSet& irr, const Schema& s);

struct EqFr {
  Substitution eq_sub;
  std::set<Var> fr;
};
EqFr compute_eq_fr(const EqSet& store, const Substitution& step_sub, const Schema& s);
std::set<Var> irrelevant_vars(const EqSet& irr, const EqSet& store, const Schema& s);

unsigned max_index(const std::vector<Equation>& eqs);
unsigned max_depth(const std::vector<Equation>& eqs);
// max{maxI, depbnd} of U(0) psi_0
unsigned stab_index(const std::vector<Equation>& u0, const Substitution& psi0);
unsigned stab_index(const SchematicProblem& p);  // throws SchemaError if instance 0 fails

// Reference denominator: the largest metric among instances 0..stab.
long reference_metric(const std::vector<long>& history, unsigned stab);
bool stable(long metric, long reference);
std::optional<double> stability_ratio(long metric, long reference);

std::optional<Substitution> check_for_map(const std::set<Var>& fr1, const EqSet& ns1,
                                          const std::set<Var>& fr2, const EqSet& ns2,
                                          const Schema& s);
bool var_disjoint(const std::set<Var>& fr1, const EqSet& ns1, const std::set<Var>& fr2,
                  const EqSet& ns2, const Schema& s);

unsigned default_cap(const SchematicProblem& p, unsigned stab);

SolveResult u_sch_unif(const SchematicProblem& p, const SolveOptions& opts = {});

}  // namespace schematic
