#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "schematic/term.hpp"

namespace schematic {

struct Equation {
  Term lhs;
  Term rhs;

  Equation flipped() const { return {rhs, lhs}; }
  bool reflexive() const { return lhs == rhs; }
  bool is_binding() const { return lhs.is_var(); }
  friend bool operator==(const Equation& a, const Equation& b) {
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

struct EqLess {
  bool operator()(const Equation& a, const Equation& b) const {
    auto c = compare(a.lhs, b.lhs);
    if (c != 0) return c < 0;
    return compare(a.rhs, b.rhs) < 0;
  }
};

using EqSet = std::set<Equation, EqLess>;

std::string to_string(const Equation& e);
std::string to_string(const EqSet& s);  // "{a = b, ...}" in canonical order
std::set<Var> vars_of(const EqSet& s);
std::set<Var> vars_of(const std::vector<Equation>& s);

// Finite substitution. Self-bindings are never stored.
class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const Var, Term>> init);

  void bind(const Var& v, const Term& t);  // drops x -> x
  const Term* find(const Var& v) const;
  bool contains(const Var& v) const { return map_.count(v) != 0; }
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  std::set<Var> domain() const;

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.map_ == b.map_;
  }

 private:
  std::map<Var, Term> map_;
};

std::string to_string(const Substitution& s);  // "{X[0] -> a, ...}"

// Simultaneous replacement; shared subterms are rewritten once.
Term apply(const Substitution& s, const Term& t);
Equation apply(const Substitution& s, const Equation& e);
EqSet apply(const Substitution& s, const EqSet& eqs);
Substitution compose(const Substitution& s, const Substitution& t);

enum class Failure { None, Clash, Cycle };
std::string to_string(Failure f);

struct UnifyResult {
  Failure failure = Failure::None;
  std::optional<Equation> culprit;  // offending equation on failure
  Substitution mgu;                 // idempotent; empty on failure
  bool ok() const { return failure == Failure::None; }
};

UnifyResult unify(const std::vector<Equation>& eqs);
UnifyResult unify(const EqSet& eqs);
// Same decision without building the mgu; cheap on large shared terms.
UnifyResult unifiable(const std::vector<Equation>& eqs);

}  // namespace schematic
