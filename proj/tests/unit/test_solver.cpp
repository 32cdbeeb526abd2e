#include "doctest.h"
#include "schematic/oracle.hpp"
#include "schematic/problem_io.hpp"
#include "schematic/solver.hpp"

using namespace schematic;

namespace {

EqSet eqs(std::initializer_list<const char*> list) {
  EqSet out;
  for (const char* e : list) out.insert(parse_equation(e));
  return out;
}

SchematicProblem prob(const char* text) { return parse_problem(text).problem; }

const char* kInterleaved =
    "schema: L[i] -> f(f(X[i+1], f(Z[i], f(X[i+1], f(X[i], f(Z[i+1], X[i]))))), L[i+1]);"
    "problem: f(X[4], L[0]) = f(f(Y[3], Y[3]), f(Y[0], f(Y[1], Y[0])));";

const char* kNested =
    "schema: L[i] -> h(h(X[i], h(X[i+1], X[i])), L[i+1]);"
    "problem: L[0] = h(Y[0], h(Y[1], Y[0]));";

std::set<Var> vset(std::initializer_list<const char*> vs) {
  std::set<Var> out;
  for (const char* v : vs) out.insert(parse_term(v).as_var());
  return out;
}

}  // namespace

TEST_CASE("instance problems") {
  SchematicProblem p = prob(kNested);
  CHECK(instance_problem(p, 0) == p.equations);
  auto u1 = instance_problem(p, 1);
  REQUIRE(u1.size() == 1);
  CHECK(u1[0] == parse_equation("h(h(X[0],h(X[1],X[0])),L[1]) = h(Y[0],h(Y[1],Y[0]))"));
  SchematicProblem q = prob("schema: L[i] -> f(f(X[i], X[i]), L[i+1]); problem: L[0] = f(Y[0], Y[0]);");
  for (unsigned i = 0; i < 5; ++i) CHECK(instance_problem(q, i)[0].rhs == parse_term("f(Y[0], Y[0])"));
}

TEST_CASE("step substitution of the three rule problem") {
  SchematicProblem p = prob(
      "schema:"
      "  L[i] -> f(f(X[i], f(Z[i+1], f(E[i], f(X[i+1], f(B[i+1], X[i+1]))))), L[i+1]);"
      "  S[i] -> f(f(F[i], f(G[i], H[i])), S[i+1]);"
      "  R[i] -> f(f(A[i], B[i]), R[i+1]);"
      "problem: f(X[4], L[0]) = f(f(f(A[0], f(R[3], B[0])), R[0]), f(S[0], f(C[0], D[0])));");
  auto fc = th_unif(instance_problem(p, 0), p.schema);
  REQUIRE(fc.verdict == Verdict::Ok);
  CHECK(fc.store == eqs({"X[4] = f(f(A[0], f(R[3], B[0])), R[0])", "L[0] = f(S[0], f(C[0], D[0]))"}));
  Substitution psi = step_substitution(fc.store, p.schema);
  CHECK(psi.size() == 4);
  CHECK(*psi.find(Var{"L", 0}) == parse_term("f(f(X[0],f(Z[1],f(E[0],f(X[1],f(B[1],X[1]))))),L[1])"));
  CHECK(*psi.find(Var{"S", 0}) == parse_term("f(f(F[0],f(G[0],H[0])),S[1])"));
  CHECK(*psi.find(Var{"R", 0}) == parse_term("f(f(A[0],B[0]),R[1])"));
  CHECK(*psi.find(Var{"R", 3}) == parse_term("f(f(A[3],B[3]),R[4])"));
  CHECK(step_substitution(eqs({"X[0] = a"}), p.schema).empty());
}

TEST_CASE("irrelevant sets of the worked example") {
  SolveResult r = u_sch_unif(prob(kInterleaved));
  REQUIRE(r.records.size() > 5);
  CHECK(r.records[0].irr.empty());
  CHECK(r.records[4].irr.count(parse_equation("Z[0] = f(X[4],f(Z[3],f(X[4],f(X[3],f(Z[4],X[3])))))")));
}

TEST_CASE("cycle check over irrelevant sets") {
  Schema s = prob(kNested).schema;
  CHECK(cycle_check({}, s).ok);
  CHECK(cycle_check(eqs({"Y[1] = h(X[1], h(X[2], X[1]))"}), s).ok);
  // X[0] comes back once L[0] is unfolded
  Schema t = prob("schema: L[i] -> f(X[i], L[i+1]); problem: a = a;").schema;
  ChcResult bad = cycle_check(eqs({"X[0] = f(L[0], a)"}), t);
  CHECK_FALSE(bad.ok);
  CHECK(bad.culprit.has_value());
}

TEST_CASE("eq substitution and future relevant variables") {
  SolveResult r = u_sch_unif(prob(kInterleaved));
  REQUIRE(r.records.size() > 5);
  const InstanceRecord& r5 = r.records[5];
  CHECK(r5.store == eqs({"L[5] = f(X[0],f(Z[1],X[0]))", "X[5] = X[3]", "Z[5] = Z[3]", "X[3] = X[5]", "Z[3] = Z[5]"}));
  CHECK(to_string(r5.eq_sub) == "{X[3] -> X[5], Z[3] -> Z[5]}");
  CHECK(r5.fr == vset({"X[5]", "Z[5]"}));
  CHECK(r.records[0].eq_sub.empty());
  CHECK(r.records[0].fr == vset({"X[4]"}));
  Schema none;
  EqFr plain = compute_eq_fr(eqs({"X[0] = a"}), {}, none);
  CHECK(plain.eq_sub.empty());
  CHECK(plain.fr.empty());
}

TEST_CASE("stabilisation index") {
  CHECK(stab_index(prob(kInterleaved)) == 8);
  CHECK(stab_index(prob(kNested)) == 4);
  // no schema variable in the store: just the problem's own bound
  CHECK(stab_index(prob("schema: L[i] -> f(X[i], L[i+1]); problem: f(Y[2], Y[5]) = f(a, b);")) == 5);
}

TEST_CASE("stability test") {
  CHECK(stable(5, 10));
  CHECK(stable(10, 10));
  CHECK_FALSE(stable(12, 10));
  CHECK(*stability_ratio(12, 10) == doctest::Approx(1.2));
  CHECK(*stability_ratio(5, 10) == doctest::Approx(0.5));
  CHECK_FALSE(stability_ratio(3, 0));
  CHECK(reference_metric({5, 9, 8, 11, 10, 5, 7}, 3) == 11);
}

TEST_CASE("mapping between stores") {
  Schema s = prob(kNested).schema;
  EqSet a = eqs({"L[3] = h(X[1], X[0])"});
  auto id = check_for_map({}, a, {}, a, s);
  REQUIRE(id);
  CHECK(id->empty());
  auto none = check_for_map({}, eqs({"L[3] = h(W[1], X[0])"}), {}, a, s);
  CHECK_FALSE(none);
  auto mu = check_for_map(vset({"X[4]"}), eqs({"L[4] = h(X[2], X[4])"}), vset({"X[3]"}),
                          eqs({"L[3] = h(X[1], X[3])"}), s);
  REQUIRE(mu);
  CHECK(to_string(*mu) == "{L[4] -> L[3], X[2] -> X[1], X[4] -> X[3]}");
  // a future relevant variable must land on a future relevant one
  CHECK_FALSE(check_for_map(vset({"X[4]"}), eqs({"L[4] = h(X[2], X[4])"}), vset({"X[1]"}),
                            eqs({"L[3] = h(X[1], X[3])"}), s));
}

TEST_CASE("disjointness of future relevant variables") {
  Schema s = prob(kNested).schema;
  CHECK(var_disjoint({}, {}, {}, {}, s));
  CHECK_FALSE(var_disjoint(vset({"X[5]"}), eqs({"L[5] = X[5]"}), vset({"X[5]"}), eqs({"L[6] = X[5]"}), s));
  SolveResult r = u_sch_unif(prob(kInterleaved));
  REQUIRE(r.records.size() > 15);
  const auto &a = r.records[15], &b = r.records[5];
  CHECK(var_disjoint(a.fr, a.collapsed, b.fr, b.collapsed, s));
}

TEST_CASE("worked example: cycle at 15 against 5") {
  SolveResult r = u_sch_unif(prob(kInterleaved));
  REQUIRE(r.outcome.kind == Outcome::Kind::Cycle);
  CHECK(r.stab_index == 8u);
  CHECK(r.outcome.i == 15);
  CHECK(r.outcome.j == 5);
  // the mapping carries store 15 onto store 5
  CHECK(to_string(r.outcome.mapping) == "{L[15] -> L[5], X[10] -> X[0], Z[11] -> Z[1]}");
  CHECK(schematic::apply(r.outcome.mapping, r.records[15].collapsed) == r.records[5].collapsed);
}

TEST_CASE("worked example under the other cycle guards") {
  for (CycleGuard g : {CycleGuard::RawDisjoint, CycleGuard::Either}) {
    SolveOptions o;
    o.guard = g;
    SolveResult r = u_sch_unif(prob(kInterleaved), o);
    REQUIRE(r.outcome.kind == Outcome::Kind::Cycle);
    CHECK(r.outcome.i == 15);
    CHECK(r.outcome.j == 5);
  }
}

TEST_CASE("equal pair schema is unifiable") {
  SchematicProblem p = prob("schema: L[i] -> f(f(X[i], X[i]), L[i+1]); problem: L[0] = f(Y[0], Y[0]);");
  SolveResult r = u_sch_unif(p);
  REQUIRE(r.outcome.kind == Outcome::Kind::Cycle);
  // golden pair, checked against the bounded oracle below
  CHECK(r.outcome.i == 5);
  CHECK(r.outcome.j == 2);
  CHECK(schematic::apply(r.outcome.mapping, r.records[r.outcome.i].collapsed) == r.records[r.outcome.j].collapsed);
  OracleReport rep = bounded_check(p, 5);
  CHECK_FALSE(rep.first_failure);
  CHECK(rep.checked_up_to == 5u);
}

TEST_CASE("constant argument clashes once L[1] unfolds") {
  SchematicProblem p = prob(
      "schema: L[i] -> h(h(X[i], h(X[i+1], X[i])), L[i+1]);"
      "problem: L[0] = h(Y[0], a);");
  SolveResult r = u_sch_unif(p);
  REQUIRE(r.outcome.kind == Outcome::Kind::NotUnifiable);
  CHECK(r.outcome.instance == 2);
  CHECK(r.outcome.cause == Cause::Clash);
  OracleReport rep = bounded_check(p, 5);
  REQUIRE(rep.first_failure);
  CHECK(rep.first_failure->instance == 2);
  CHECK(rep.first_failure->cause == Failure::Clash);
}

TEST_CASE("failure at instance zero") {
  SolveResult r = u_sch_unif(prob("schema: L[i] -> f(X[i], L[i+1]); problem: g(a) = g(b);"));
  CHECK(r.outcome.kind == Outcome::Kind::NotUnifiable);
  CHECK(r.outcome.instance == 0);
  CHECK(r.records.empty());
}

TEST_CASE("iteration cap") {
  SolveOptions o;
  o.max_iterations = 3;
  SolveResult r = u_sch_unif(prob(kInterleaved), o);
  CHECK(r.outcome.kind == Outcome::Kind::Exhausted);
  CHECK(r.outcome.cap == 3);
  CHECK(r.records.size() == 4);
  CHECK(default_cap(prob(kInterleaved), 8) == 100);
}

TEST_CASE("mutually recursive schemas are refused") {
  SchematicProblem p;
  p.schema.add_rule("L", parse_term("f(M[1])"));
  p.schema.add_rule("M", parse_term("g(L[0])"));
  p.equations.push_back(parse_equation("L[0] = Y[0]"));
  CHECK_THROWS_AS(u_sch_unif(p), SchemaError);
}
