#include "schematic/term.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace schematic {

namespace {

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

uint64_t sat_add(uint64_t a, uint64_t b) {
  uint64_t r = a + b;
  return r < a ? std::numeric_limits<uint64_t>::max() : r;
}

}  // namespace

struct Term::Node {
  bool is_var = false;
  Var v;                      // when is_var
  std::string head;           // when !is_var
  std::vector<Term> args;
  size_t hash = 0;
  unsigned depth = 1;
  uint64_t size = 1;
};

std::string to_string(const Var& v) { return v.sym + "[" + std::to_string(v.idx) + "]"; }

size_t VarHash::operator()(const Var& v) const noexcept {
  return mix(std::hash<std::string>{}(v.sym), v.idx);
}

Term::Term() : Term(Term::app("_")) {}

Term Term::var(std::string sym, unsigned idx) { return var(Var{std::move(sym), idx}); }

Term Term::var(const Var& v) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->v = v;
  n->hash = mix(0x51ed27, VarHash{}(v));
  return Term(std::move(n));
}

Term Term::app(std::string head, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  size_t h = mix(0x3c6ef3, std::hash<std::string>{}(head));
  unsigned d = 0;
  uint64_t s = 1;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    d = std::max(d, a.depth());
    s = sat_add(s, a.size());
  }
  n->head = std::move(head);
  n->args = std::move(args);
  n->hash = mix(h, n->args.size());
  n->depth = d + 1;
  n->size = s;
  return Term(std::move(n));
}

bool Term::is_var() const { return node_->is_var; }
const Var& Term::as_var() const { return node_->v; }
const std::string& Term::head() const { return node_->is_var ? node_->v.sym : node_->head; }
const std::vector<Term>& Term::args() const { return node_->args; }
size_t Term::hash() const { return node_->hash; }
unsigned Term::depth() const { return node_->depth; }
uint64_t Term::size() const { return node_->size; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  if (a.node_->is_var != b.node_->is_var) return false;
  if (a.node_->is_var) return a.node_->v == b.node_->v;
  if (a.node_->head != b.node_->head || a.node_->args.size() != b.node_->args.size())
    return false;
  for (size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

std::strong_ordering compare(const Term& a, const Term& b) {
  if (a.id() == b.id()) return std::strong_ordering::equal;
  if (a.is_var() != b.is_var())
    return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.is_var()) return a.as_var() <=> b.as_var();
  if (auto c = a.head() <=> b.head(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (size_t i = 0; i < a.arity(); ++i)
    if (auto c = compare(a.args()[i], b.args()[i]); c != 0) return c;
  return std::strong_ordering::equal;
}

std::string to_string(const Term& t) {
  if (t.is_var()) return to_string(t.as_var());
  std::string s = t.head();
  if (t.arity() == 0) return s;
  s += '(';
  for (size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ',';
    s += to_string(t.args()[i]);
  }
  s += ')';
  return s;
}

Term shift(unsigned d, const Term& t) {
  if (d == 0) return t;
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    if (u.is_var()) return Term::var(u.as_var().sym, u.as_var().idx + d);
    if (u.arity() == 0) return u;
    if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(u.arity());
    for (const auto& a : u.args()) args.push_back(go(a));
    Term r = Term::app(u.head(), std::move(args));
    memo.emplace(u.id(), r);
    return r;
  };
  return go(t);
}

unsigned depth(const Term& t) { return t.depth(); }

std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  std::function<void(const Term&)> go = [&](const Term& u) {
    out.push_back(cur);
    for (unsigned i = 0; i < u.arity(); ++i) {
      cur.push_back(i + 1);
      go(u.args()[i]);
      cur.pop_back();
    }
  };
  go(t);
  return out;
}

Term subterm_at(const Term& t, const Position& p) {
  Term cur = t;
  for (unsigned k : p) {
    if (k == 0 || k > cur.arity())
      throw std::out_of_range("invalid position " + to_string(p) + " in " + to_string(t));
    cur = cur.args()[k - 1];
  }
  return cur;
}

std::string to_string(const Position& p) {
  if (p.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

void for_each_node(const Term& t, const std::function<void(const Term&)>& fn) {
  std::unordered_set<const void*> seen;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = stack.back();
    stack.pop_back();
    if (!seen.insert(u.id()).second) continue;
    fn(u);
    for (auto it = u.args().rbegin(); it != u.args().rend(); ++it) stack.push_back(*it);
  }
}

void collect_vars(const Term& t, std::set<Var>& out) {
  for_each_node(t, [&](const Term& u) {
    if (u.is_var()) out.insert(u.as_var());
  });
}

std::set<Var> vars_of(const Term& t) {
  std::set<Var> out;
  collect_vars(t, out);
  return out;
}

VarSets var_sets(const Term& t) {
  VarSets vs;
  collect_vars(t, vs.vars);
  for (const auto& v : vs.vars) {
    vs.cls.insert(v.sym);
    vs.idx.insert(v.idx);
  }
  return vs;
}

bool occurs(const Var& v, const Term& t) {
  bool found = false;
  for_each_node(t, [&](const Term& u) {
    if (u.is_var() && u.as_var() == v) found = true;
  });
  return found;
}

}  // namespace schematic
