#include "schematic/schema.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>

namespace schematic {

const Term& Schema::base(const std::string& sym) const {
  auto it = rules_.find(sym);
  if (it == rules_.end()) throw SchemaError("unknown schema symbol " + sym);
  return it->second;
}

std::set<std::string> Schema::domain() const {
  std::set<std::string> d;
  for (const auto& [k, _] : rules_) d.insert(k);
  return d;
}

std::string to_string(SchemaClass c) {
  switch (c) {
    case SchemaClass::NotSimple: return "not-simple";
    case SchemaClass::Simple: return "simple";
    case SchemaClass::Uniform: return "uniform";
    case SchemaClass::Primitive: return "primitive";
  }
  return "?";
}

std::set<unsigned> recursion_offsets(const Schema& s, const std::string& sym) {
  std::set<unsigned> out;
  for (const auto& v : vars_of(s.base(sym)))
    if (v.sym == sym) out.insert(v.idx);
  return out;
}

SchemaClass classify(const Schema& s) {
  for (const auto& [sym, base] : s.rules()) {
    int n = 0;
    for (const auto& c : var_sets(base).cls) n += s.contains(c);
    if (n > 1) return SchemaClass::NotSimple;
  }
  bool primitive = true;
  for (const auto& [sym, _] : s.rules()) {
    auto r = recursion_offsets(s, sym);
    if (r.size() > 1) return SchemaClass::Simple;
    if (!r.empty() && *r.begin() > 1) primitive = false;
  }
  return primitive ? SchemaClass::Primitive : SchemaClass::Uniform;
}

bool mutually_recursive(const Schema& s) {
  std::map<std::string, std::set<std::string>> succ;
  for (const auto& [sym, base] : s.rules())
    for (const auto& c : var_sets(base).cls)
      if (c != sym && s.contains(c)) succ[sym].insert(c);
  std::map<std::string, int> colour;
  std::function<bool(const std::string&)> dfs = [&](const std::string& x) {
    colour[x] = 1;
    for (const auto& y : succ[x]) {
      if (colour[y] == 1) return true;
      if (colour[y] == 0 && dfs(y)) return true;
    }
    colour[x] = 2;
    return false;
  };
  for (const auto& [sym, _] : s.rules())
    if (colour[sym] == 0 && dfs(sym)) return true;
  return false;
}

Substitution t_substitution(const Schema& s, const Term& t) {
  Substitution out;
  for (const auto& v : vars_of(t))
    if (s.contains(v)) out.bind(v, s.binding(v));
  return out;
}

Term instance(const Schema& s, const Term& t, unsigned i) {
  Term cur = t;
  for (unsigned k = 0; k < i; ++k) {
    Substitution step = t_substitution(s, cur);
    if (step.empty()) break;
    cur = schematic::apply(step, cur);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// make_primitive

namespace {

std::set<std::string> all_symbols(const std::vector<Equation>& eqs, const Schema& s) {
  std::set<std::string> out;
  for (const auto& v : vars_of(eqs)) out.insert(v.sym);
  for (const auto& [sym, base] : s.rules()) {
    out.insert(sym);
    for (const auto& c : var_sets(base).cls) out.insert(c);
  }
  return out;
}

}  // namespace

PrimitiveForm make_primitive(const std::vector<Equation>& eqs, const Schema& xi) {
  auto cls = classify(xi);
  if (cls != SchemaClass::Uniform && cls != SchemaClass::Primitive)
    throw SchemaError("schema is " + to_string(cls) + ", expected uniform");

  PrimitiveForm out{eqs, xi, {}};
  std::set<std::string> used = all_symbols(eqs, xi);
  std::map<std::pair<std::string, unsigned>, std::string> fresh_names;
  auto fresh = [&](const std::string& y, unsigned k) {
    auto key = std::make_pair(y, k);
    if (auto it = fresh_names.find(key); it != fresh_names.end()) return it->second;
    std::string base = y + "@" + std::to_string(k), name = base;
    for (int n = 1; used.count(name); ++n) name = base + "_" + std::to_string(n);
    used.insert(name);
    fresh_names.emplace(key, name);
    return name;
  };

  for (;;) {
    // symbol with the largest offset > 1; ties go to the least symbol
    std::string x;
    unsigned m = 1;
    for (const auto& [sym, _] : out.schema.rules()) {
      auto r = recursion_offsets(out.schema, sym);
      if (r.size() == 1 && *r.begin() > m) {
        m = *r.begin();
        x = sym;
      }
    }
    if (x.empty()) break;

    std::set<std::string> split;
    for (const auto& c : var_sets(out.schema.base(x)).cls)
      if (c != x && !out.schema.contains(c)) split.insert(c);

    auto rename = [&](const Var& v) -> Term {
      return Term::var(fresh(v.sym, v.idx % m), v.idx / m);
    };

    Substitution on_bases;  // the schematic substitution at i = 0
    on_bases.bind(Var{x, m}, Term::var(x, 1));
    for (const auto& [sym, base] : out.schema.rules())
      for (const auto& v : vars_of(base))
        if (split.count(v.sym)) on_bases.bind(v, rename(v));

    Schema next;
    for (const auto& [sym, base] : out.schema.rules()) next.add_rule(sym, schematic::apply(on_bases, base));

    Substitution on_problem;  // domain bindings dropped
    for (const auto& v : vars_of(out.equations))
      if (split.count(v.sym)) on_problem.bind(v, rename(v));

    for (auto& e : out.equations) e = schematic::apply(on_problem, e);
    out.sigma = compose(out.sigma, on_problem);
    out.schema = std::move(next);
  }

  Substitution restricted;
  for (const auto& v : vars_of(eqs))
    if (const Term* t = out.sigma.find(v)) restricted.bind(v, *t);
  out.sigma = std::move(restricted);
  return out;
}

// ---------------------------------------------------------------------------
// normalize

namespace {

constexpr int kInf = INT_MAX;

struct KRange {  // admissible unfolding counts [lo, hi]
  int lo = 0, hi = kInf;
  bool empty() const { return lo > hi; }
};

KRange meet(KRange a, KRange b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

class Folder {
 public:
  explicit Folder(const Schema& s) : s_(s) {}

  // Shift d such that t could be an unfolding of sym_d, read off from the
  // first variable position of the base pattern.
  std::optional<unsigned> offset(const Term& t, const std::string& sym) const {
    const Term& base = s_.base(sym);
    if (base.is_var()) return std::nullopt;
    return offset_in(t, base);
  }

  // Values of k for which t == instance(sym_d, k); empty range if none.
  KRange unfold_count(const Term& t, const std::string& sym, unsigned d) const {
    if (t.is_var() && t.as_var() == Var{sym, d}) return {0, 0};
    const Term& base = s_.base(sym);
    if (base.is_var()) return {1, 0};
    KRange inner{0, kInf};
    if (!match(t, base, d, inner)) return {1, 0};
    KRange k{inner.lo == kInf ? kInf : inner.lo + 1, inner.hi == kInf ? kInf : inner.hi + 1};
    return meet(k, {1, kInf});
  }

 private:
  std::optional<unsigned> offset_in(const Term& t, const Term& pat) const {
    if (pat.is_var()) {
      const Var& pv = pat.as_var();
      if (t.is_var() && t.as_var().sym == pv.sym) {
        if (t.as_var().idx < pv.idx) return std::nullopt;
        return t.as_var().idx - pv.idx;
      }
      if (s_.contains(pv.sym) && !t.is_var()) {
        auto inner = offset(t, pv.sym);
        if (!inner || *inner < pv.idx) return std::nullopt;
        return *inner - pv.idx;
      }
      return std::nullopt;
    }
    if (t.is_var() || t.head() != pat.head() || t.arity() != pat.arity()) return std::nullopt;
    for (size_t i = 0; i < pat.arity(); ++i)
      if (auto d = offset_in(t.args()[i], pat.args()[i])) return d;
    return std::nullopt;
  }

  // t against shift(d, pat) where domain variables stand for (k-1)-fold
  // unfoldings; constraints on k-1 are accumulated in inner.
  bool match(const Term& t, const Term& pat, unsigned d, KRange& inner) const {
    if (pat.is_var()) {
      Var pv{pat.as_var().sym, pat.as_var().idx + d};
      if (s_.contains(pv.sym)) {
        inner = meet(inner, unfold_count(t, pv.sym, pv.idx));
        return !inner.empty();
      }
      return t.is_var() && t.as_var() == pv;
    }
    if (t.is_var() || t.head() != pat.head() || t.arity() != pat.arity()) return false;
    for (size_t i = 0; i < pat.arity(); ++i)
      if (!match(t.args()[i], pat.args()[i], d, inner)) return false;
    return true;
  }

  const Schema& s_;
};

}  // namespace

Term normalize(const Schema& s, const Term& t) {
  Folder folder(s);
  std::function<Term(const Term&)> go = [&](const Term& r) -> Term {
    if (r.is_var() || r.arity() == 0) return r;
    for (const auto& [sym, _] : s.rules()) {
      auto d = folder.offset(r, sym);
      if (!d) continue;
      if (!folder.unfold_count(r, sym, *d).empty()) return Term::var(sym, *d);
    }
    std::vector<Term> args;
    for (const auto& a : r.args()) args.push_back(go(a));
    return Term::app(r.head(), std::move(args));
  };
  return go(t);
}

}  // namespace schematic
