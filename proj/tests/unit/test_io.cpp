#include <random>

#include "doctest.h"
#include "schematic/oracle.hpp"
#include "schematic/problem_io.hpp"
#include "support/random_problems.hpp"

using namespace schematic;

TEST_CASE("parse the nested problem") {
  auto pp = parse_problem(
      "schema: L[i] -> h(h(X[i], h(X[i+1], X[i])), L[i+1]); problem: L[0] = h(Y[0], h(Y[1], Y[0]));");
  CHECK(pp.problem.schema.base("L") == parse_term("h(h(X[0], h(X[1], X[0])), L[1])"));
  REQUIRE(pp.problem.equations.size() == 1);
  CHECK(pp.problem.equations[0] == parse_equation("L[0] = h(Y[0], h(Y[1], Y[0]))"));
  CHECK(pp.directives.empty());
}

TEST_CASE("directives and comments") {
  auto pp = parse_problem(
      "# a comment line\n"
      "schema:\n  L[i] -> f(X[i], L[i+1]);\n"
      "problem:\n  L[0] = f(Y[0], Y[1]);\n"
      "# expect = cycle\n# note = two words\n");
  CHECK(pp.directive("expect") == "cycle");
  CHECK(pp.directive("note") == "two words");
  CHECK_FALSE(pp.directive("missing"));
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_problem("schema:\n  L[i] -> f(X[i], L[i+1])\nproblem:\n  L[0] = a;\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).find("';'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[i]); problem: f(X[0]) = f(a, b);"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[i-1]); problem: a = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[2]); problem: a = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[j] -> f(X[j]); problem: a = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[i]); problem: L[i] = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[i]); problem: X = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(X[i]); L[i] -> a; problem: a = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: problem: a = a;"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> a; problem:"), ParseError);
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> a; problem: a = a; $"), ParseError);
}

TEST_CASE("schemas outside the uniform class are refused") {
  try {
    parse_problem("schema: L[i] -> f(L[i+1], L[i+2]); problem: L[0] = a;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("simple") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_problem("schema: L[i] -> f(M[i+1]); M[i] -> g(L[i]); problem: L[0] = a;"), ParseError);
  CHECK_NOTHROW(parse_problem("schema: L[i] -> f(L[i+1], L[i+2]); problem: L[0] = a;", false));
}

TEST_CASE("print then parse gives the same problem") {
  std::mt19937 rng(4);
  for (int n = 0; n < 300; ++n) {
    SchematicProblem p = testgen::random_problem(rng);
    std::vector<std::pair<std::string, std::string>> dirs{{"expect", "cycle"}, {"seed", std::to_string(n)}};
    std::string text = print_problem(p, dirs);
    auto back = parse_problem(text, false);
    CHECK(back.problem.schema == p.schema);
    CHECK(back.problem.equations == p.equations);
    CHECK(back.directives == dirs);
    CHECK(print_problem(back.problem, back.directives) == text);
  }
}

TEST_CASE("rule terms print with offsets") {
  CHECK(print_rule_term(parse_term("f(X[0], L[1])")) == "f(X[i], L[i+1])");
}

TEST_CASE("trace of the nested problem") {
  auto pp = parse_problem(
      "schema: L[i] -> h(h(X[i], h(X[i+1], X[i])), L[i+1]); problem: L[0] = h(Y[0], h(Y[1], Y[0]));");
  SolveResult r = u_sch_unif(pp.problem);
  std::string t = emit_trace(r);
  CHECK(t.find("== instance 1\n") != std::string::npos);
  auto at1 = t.find("== instance 1\n");
  auto store1 = t.find("  store:\n    L[1] = h(Y[1],Y[0])\n    Y[0] = h(X[0],h(X[1],X[0]))\n", at1);
  CHECK(store1 != std::string::npos);
  CHECK(t.ends_with("\ncycle i=7 j=3\n"));
  CHECK(emit_trace(r) == t);
}

TEST_CASE("verdict only trace") {
  SolveResult r;
  r.outcome.kind = Outcome::Kind::NotUnifiable;
  r.outcome.instance = 0;
  CHECK(emit_trace(r) == "not-unifiable instance=0 cause=clash\n");
}

TEST_CASE("json shape") {
  auto pp = parse_problem("schema: L[i] -> f(X[i], L[i+1]); problem: L[0] = L[1];");
  SolveResult r = u_sch_unif(pp.problem);
  OracleReport rep = bounded_check(pp.problem, 3);
  auto j = to_json(r, &rep);
  CHECK(j["verdict"] == "cycle");
  CHECK(j["i"].is_number());
  CHECK(j["j"].is_number());
  CHECK(j["mapping"].is_object());
  CHECK(j["stab_index"].is_number());
  CHECK(j["instances"].is_array());
  CHECK(j["instances"].size() == r.records.size());
  CHECK(j["oracle"]["checked_up_to"] == 3);
  CHECK(j["oracle"]["first_failure"].is_null());
  auto k = to_json(r);
  CHECK(k["oracle"].is_null());
  CHECK(format_ratio(0.5) == "0.5");
  CHECK(format_ratio(2.0 / 3.0) == "0.6667");
  CHECK(format_ratio(1.0) == "1");
}
