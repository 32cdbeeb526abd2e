#include <random>

#include "doctest.h"
#include "schematic/problem_io.hpp"
#include "schematic/term.hpp"
#include "support/random_problems.hpp"

using namespace schematic;

namespace {

// shift done the long way: rebuild from the printed form with indices bumped
Term shift_by_hand(unsigned d, const Term& t) {
  if (t.is_var()) return Term::var(t.as_var().sym, t.as_var().idx + d);
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(shift_by_hand(d, a));
  return Term::app(t.head(), args);
}

}  // namespace

TEST_CASE("shift examples") {
  Term t = parse_term("f(X[0], g(Y[2]))");
  CHECK(to_string(shift(3, t)) == "f(X[3],g(Y[5]))");
  CHECK(shift(0, t) == t);
  CHECK(shift(2, Term::app("a")) == Term::app("a"));
}

TEST_CASE("shift laws on random terms") {
  std::mt19937 rng(7);
  for (int k = 0; k < 500; ++k) {
    Term t = testgen::random_term(rng, 4, 4, 5);
    std::uniform_int_distribution<unsigned> d(0, 6);
    unsigned a = d(rng), b = d(rng);
    CHECK(shift(0, t) == t);
    CHECK(shift(a, shift(b, t)) == shift(a + b, t));
    CHECK(shift(a, t) == shift_by_hand(a, t));
    CHECK(positions(shift(a, t)) == positions(t));
    CHECK(shift(a, t).depth() == t.depth());
    for (const auto& v : vars_of(t)) CHECK(vars_of(shift(a, t)).count(Var{v.sym, v.idx + a}));
  }
}

TEST_CASE("structural equality ignores sharing") {
  Term a1 = parse_term("f(X[1], a)");
  Term a2 = parse_term("f(X[1], a)");
  CHECK(a1 == a2);
  CHECK(a1.hash() == a2.hash());
  CHECK(compare(a1, a2) == std::strong_ordering::equal);
  CHECK(parse_term("f(X[1], a)") != parse_term("f(X[2], a)"));
}

TEST_CASE("canonical order puts variables first") {
  Term x0 = Term::var("X", 0), x1 = Term::var("X", 1), y0 = Term::var("Y", 0);
  Term a = Term::app("a");
  CHECK(compare(x0, x1) < 0);
  CHECK(compare(x1, y0) < 0);
  CHECK(compare(y0, a) < 0);
  CHECK(compare(parse_term("f(a, b)"), parse_term("g(a)")) < 0);
  CHECK(compare(parse_term("f(X[0], b)"), parse_term("f(X[0], a)")) > 0);
}

TEST_CASE("canonical order is a strict total order") {
  std::mt19937 rng(11);
  std::vector<Term> ts;
  for (int k = 0; k < 120; ++k) ts.push_back(testgen::random_term(rng, 3, 3, 2));
  for (const auto& a : ts)
    for (const auto& b : ts) {
      auto ab = compare(a, b), ba = compare(b, a);
      CHECK((ab == 0) == (a == b));
      CHECK((ab < 0) == (ba > 0));
    }
}

TEST_CASE("positions and subterms") {
  Term t = parse_term("f(g(X[0]), a)");
  auto ps = positions(t);
  CHECK(ps.size() == 4);
  CHECK(subterm_at(t, {}) == t);
  CHECK(subterm_at(t, {1, 1}) == Term::var("X", 0));
  CHECK(to_string(Position{1, 1}) == "1.1");
  CHECK(to_string(Position{}) == "e");
  CHECK_THROWS_AS(subterm_at(t, {3}), std::out_of_range);
  CHECK_THROWS_AS(subterm_at(t, {2, 1}), std::out_of_range);
}

TEST_CASE("depth, size and variable sets") {
  Term t = parse_term("f(g(X[0]), f(Y[2], X[0]))");
  CHECK(depth(t) == 3);
  CHECK(t.size() == 6);
  VarSets vs = var_sets(t);
  CHECK(vs.cls == std::set<std::string>{"X", "Y"});
  CHECK(vs.idx == std::set<unsigned>{0, 2});
  CHECK(vs.vars.size() == 2);
  CHECK(occurs(Var{"Y", 2}, t));
  CHECK_FALSE(occurs(Var{"Y", 0}, t));
}

TEST_CASE("size saturates on deep sharing") {
  Term t = Term::var("X", 0);
  for (int k = 0; k < 80; ++k) t = Term::app("f", {t, t});
  CHECK(t.size() == UINT64_MAX);
  CHECK(t.depth() == 81);
  int nodes = 0;
  for_each_node(t, [&](const Term&) { ++nodes; });
  CHECK(nodes == 81);
}
