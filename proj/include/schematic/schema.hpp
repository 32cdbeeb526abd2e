#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "schematic/term.hpp"
#include "schematic/unify.hpp"

namespace schematic {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rules X -> base(X), bases stored at shift 0: X_j is bound to shift(j, base(X)).
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::map<std::string, Term> rules) : rules_(std::move(rules)) {}

  void add_rule(const std::string& sym, const Term& base) { rules_[sym] = base; }
  bool contains(const std::string& sym) const { return rules_.count(sym) != 0; }
  bool contains(const Var& v) const { return contains(v.sym); }
  bool contains(const Term& t) const { return t.is_var() && contains(t.as_var()); }
  const Term& base(const std::string& sym) const;  // throws SchemaError
  Term binding(const Var& v) const { return shift(v.idx, base(v.sym)); }
  std::set<std::string> domain() const;
  const std::map<std::string, Term>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  friend bool operator==(const Schema& a, const Schema& b) { return a.rules_ == b.rules_; }

 private:
  std::map<std::string, Term> rules_;
};

enum class SchemaClass { NotSimple, Simple, Uniform, Primitive };
std::string to_string(SchemaClass c);

std::set<unsigned> recursion_offsets(const Schema& s, const std::string& sym);
SchemaClass classify(const Schema& s);
// True when following base terms from one domain symbol to another can
// return to the start through a different symbol.
bool mutually_recursive(const Schema& s);

Substitution t_substitution(const Schema& s, const Term& t);
Term instance(const Schema& s, const Term& t, unsigned i);

struct PrimitiveForm {
  std::vector<Equation> equations;  // U sigma'
  Schema schema;
  Substitution sigma;  // sigma' on the variables of U
};

// Rewrites a uniform schema into a primitive one by splitting parameter
// symbols by residue modulo the recursion offset.
PrimitiveForm make_primitive(const std::vector<Equation>& eqs, const Schema& s);

// Folds maximal subterms that are k-fold unfoldings (k >= 1) of some L_d.
Term normalize(const Schema& s, const Term& t);

}  // namespace schematic
