#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace schematic {

// An indexed variable X_i.
struct Var {
  std::string sym;
  unsigned idx = 0;

  auto operator<=>(const Var&) const = default;
  bool operator==(const Var&) const = default;
};

std::string to_string(const Var& v);

struct VarHash {
  size_t operator()(const Var& v) const noexcept;
};

// Immutable term handle. Subterms are shared, so copying is cheap and
// structurally equal terms compare equal regardless of sharing.
class Term {
 public:
  Term();  // the constant "_" ; only useful as a placeholder

  static Term var(std::string sym, unsigned idx);
  static Term var(const Var& v);
  static Term app(std::string head, std::vector<Term> args = {});

  bool is_var() const;
  const Var& as_var() const;           // pre: is_var()
  const std::string& head() const;     // variable symbol or function symbol
  const std::vector<Term>& args() const;
  size_t arity() const { return args().size(); }

  size_t hash() const;
  unsigned depth() const;
  // Node count of the tree unfolding, saturating at UINT64_MAX.
  uint64_t size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Deterministic total order: variables first (by symbol, then index),
// then applications by head, arity and arguments.
std::strong_ordering compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

struct TermHash {
  size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

std::string to_string(const Term& t);

Term shift(unsigned d, const Term& t);
unsigned depth(const Term& t);

using Position = std::vector<unsigned>;  // 1-based argument indices

std::vector<Position> positions(const Term& t);
Term subterm_at(const Term& t, const Position& p);  // throws std::out_of_range
std::string to_string(const Position& p);

struct VarSets {
  std::set<std::string> cls;
  std::set<unsigned> idx;
  std::set<Var> vars;
};

VarSets var_sets(const Term& t);
void collect_vars(const Term& t, std::set<Var>& out);
std::set<Var> vars_of(const Term& t);
bool occurs(const Var& v, const Term& t);

// Visit every distinct node once (shared subterms are not revisited).
void for_each_node(const Term& t, const std::function<void(const Term&)>& fn);

}  // namespace schematic
