#include "schematic/unify.hpp"

#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace schematic {

std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

std::string to_string(const EqSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(e);
  }
  return out + "}";
}

std::set<Var> vars_of(const EqSet& s) {
  std::set<Var> out;
  for (const auto& e : s) {
    collect_vars(e.lhs, out);
    collect_vars(e.rhs, out);
  }
  return out;
}

std::set<Var> vars_of(const std::vector<Equation>& s) {
  std::set<Var> out;
  for (const auto& e : s) {
    collect_vars(e.lhs, out);
    collect_vars(e.rhs, out);
  }
  return out;
}

Substitution::Substitution(std::initializer_list<std::pair<const Var, Term>> init) {
  for (const auto& [v, t] : init) bind(v, t);
}

void Substitution::bind(const Var& v, const Term& t) {
  if (t.is_var() && t.as_var() == v) {
    map_.erase(v);
    return;
  }
  map_.insert_or_assign(v, t);
}

const Term* Substitution::find(const Var& v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

std::set<Var> Substitution::domain() const {
  std::set<Var> d;
  for (const auto& [v, _] : map_) d.insert(v);
  return d;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(v) + " -> " + to_string(t);
  }
  return out + "}";
}

Term apply(const Substitution& s, const Term& t) {
  if (s.empty()) return t;
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
    if (u.is_var()) {
      const Term* r = s.find(u.as_var());
      return r ? *r : u;
    }
    if (u.arity() == 0) return u;
    if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
    std::vector<Term> args;
    args.reserve(u.arity());
    bool changed = false;
    for (const auto& a : u.args()) {
      args.push_back(go(a));
      changed = changed || args.back().id() != a.id();
    }
    Term r = changed ? Term::app(u.head(), std::move(args)) : u;
    memo.emplace(u.id(), r);
    return r;
  };
  return go(t);
}

Equation apply(const Substitution& s, const Equation& e) { return {apply(s, e.lhs), apply(s, e.rhs)}; }

EqSet apply(const Substitution& s, const EqSet& eqs) {
  EqSet out;
  for (const auto& e : eqs) out.insert(apply(s, e));
  return out;
}

Substitution compose(const Substitution& s, const Substitution& t) {
  Substitution r;
  for (const auto& [v, u] : s) r.bind(v, apply(t, u));
  for (const auto& [v, u] : t)
    if (!s.contains(v)) r.bind(v, u);
  return r;
}

std::string to_string(Failure f) {
  switch (f) {
    case Failure::None: return "none";
    case Failure::Clash: return "clash";
    case Failure::Cycle: return "cycle";
  }
  return "?";
}

namespace {

// Union-find over variables, each class carrying at most one non-variable
// term. Merging two classes that both carry a term schedules the pair of
// terms, so the solved form is reached without substituting eagerly; the
// occurs check runs once on the final class graph.
class Solver {
 public:
  UnifyResult run(const std::vector<Equation>& eqs, bool want_mgu) {
    UnifyResult res;
    for (const auto& e : eqs) {
      pending_.push_back({e.lhs, e.rhs});
      while (!pending_.empty()) {
        auto [a, b] = pending_.back();
        pending_.pop_back();
        if (!step(a, b)) {
          res.failure = Failure::Clash;
          res.culprit = Equation{a, b};
          return res;
        }
      }
    }
    if (auto bad = find_cycle()) {
      res.failure = Failure::Cycle;
      res.culprit = *bad;
      return res;
    }
    if (want_mgu) res.mgu = build_mgu(eqs);
    return res;
  }

 private:
  struct Cls {
    int parent;
    std::optional<Term> term;
    Var rep;  // least variable of the class
  };

  int node(const Var& v) {
    auto [it, fresh] = index_.try_emplace(v, static_cast<int>(cls_.size()));
    if (fresh) cls_.push_back({it->second, std::nullopt, v});
    return it->second;
  }

  int root(int i) {
    while (cls_[i].parent != i) {
      cls_[i].parent = cls_[cls_[i].parent].parent;
      i = cls_[i].parent;
    }
    return i;
  }

  bool step(const Term& a, const Term& b) {
    if (a.id() == b.id()) return true;
    if (a.is_var() && b.is_var()) {
      int ra = root(node(a.as_var())), rb = root(node(b.as_var()));
      if (ra == rb) return true;
      cls_[rb].parent = ra;
      if (cls_[rb].rep < cls_[ra].rep) cls_[ra].rep = cls_[rb].rep;
      if (cls_[ra].term && cls_[rb].term)
        pending_.push_back({*cls_[ra].term, *cls_[rb].term});
      else if (cls_[rb].term)
        cls_[ra].term = cls_[rb].term;
      return true;
    }
    if (a.is_var() || b.is_var()) {
      const Term& v = a.is_var() ? a : b;
      const Term& t = a.is_var() ? b : a;
      int r = root(node(v.as_var()));
      if (cls_[r].term)
        pending_.push_back({*cls_[r].term, t});
      else
        cls_[r].term = t;
      return true;
    }
    if (a.head() != b.head() || a.arity() != b.arity()) return false;
    if (!seen_pairs_.insert({a.id(), b.id()}).second) return true;
    for (size_t i = 0; i < a.arity(); ++i) pending_.push_back({a.args()[i], b.args()[i]});
    return true;
  }

  // Three-colour DFS over term nodes and classes. A back edge means some
  // variable occurs in the term its class is bound to.
  std::optional<Equation> find_cycle() {
    enum Colour : char { White, Grey, Black };
    std::unordered_map<const void*, Colour> term_col;
    std::vector<Colour> cls_col(cls_.size(), White);
    struct Frame {
      bool is_cls;
      int c;
      Term t;
      size_t next;
    };
    for (size_t start = 0; start < cls_.size(); ++start) {
      int r0 = root(static_cast<int>(start));
      if (cls_col[r0] != White || !cls_[r0].term) continue;
      std::vector<Frame> st;
      cls_col[r0] = Grey;
      st.push_back({true, r0, Term(), 0});
      while (!st.empty()) {
        Frame& f = st.back();
        if (f.is_cls) {
          if (f.next == 0 && cls_[f.c].term) {
            f.next = 1;
            const Term& t = *cls_[f.c].term;
            Colour& col = term_col[t.id()];
            if (col == Grey) return Equation{Term::var(cls_[f.c].rep), t};
            if (col == White) {
              col = Grey;
              st.push_back({false, -1, t, 0});
            }
            continue;
          }
          cls_col[f.c] = Black;
          st.pop_back();
          continue;
        }
        if (f.t.is_var()) {
          if (f.next == 0) {
            f.next = 1;
            int r = root(node(f.t.as_var()));
            if (cls_col.size() < cls_.size()) cls_col.resize(cls_.size(), White);
            if (cls_col[r] == Grey)
              return Equation{Term::var(cls_[r].rep), *cls_[r].term};
            if (cls_col[r] == White && cls_[r].term) {
              cls_col[r] = Grey;
              st.push_back({true, r, Term(), 0});
            }
            continue;
          }
          term_col[f.t.id()] = Black;
          st.pop_back();
          continue;
        }
        if (f.next < f.t.arity()) {
          Term child = f.t.args()[f.next++];
          Colour& col = term_col[child.id()];
          if (col == Grey) {
            // Only reachable through a class edge, so some class is grey.
            for (auto it = st.rbegin(); it != st.rend(); ++it)
              if (it->is_cls) return Equation{Term::var(cls_[it->c].rep), *cls_[it->c].term};
          }
          if (col == White) {
            col = Grey;
            st.push_back({false, -1, child, 0});
          }
          continue;
        }
        term_col[f.t.id()] = Black;
        st.pop_back();
      }
    }
    return std::nullopt;
  }

  Substitution build_mgu(const std::vector<Equation>& eqs) {
    std::unordered_map<int, Term> resolved;
    std::unordered_map<const void*, Term> memo;
    std::function<Term(const Term&)> res_term;
    std::function<Term(int)> res_cls = [&](int r) -> Term {
      if (auto it = resolved.find(r); it != resolved.end()) return it->second;
      Term out = cls_[r].term ? res_term(*cls_[r].term) : Term::var(cls_[r].rep);
      resolved.emplace(r, out);
      return out;
    };
    res_term = [&](const Term& t) -> Term {
      if (t.is_var()) return res_cls(root(node(t.as_var())));
      if (t.arity() == 0) return t;
      if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(res_term(a));
      Term out = Term::app(t.head(), std::move(args));
      memo.emplace(t.id(), out);
      return out;
    };
    Substitution s;
    for (const auto& v : vars_of(eqs)) s.bind(v, res_cls(root(node(v))));
    return s;
  }

  struct PairHash {
    size_t operator()(const std::pair<const void*, const void*>& p) const noexcept {
      return std::hash<const void*>{}(p.first) * 31 + std::hash<const void*>{}(p.second);
    }
  };

  std::unordered_map<Var, int, VarHash> index_;
  std::vector<Cls> cls_;
  std::vector<std::pair<Term, Term>> pending_;
  std::unordered_set<std::pair<const void*, const void*>, PairHash> seen_pairs_;
};

}  // namespace

UnifyResult unify(const std::vector<Equation>& eqs) { return Solver().run(eqs, true); }

UnifyResult unify(const EqSet& eqs) { return unify(std::vector<Equation>(eqs.begin(), eqs.end())); }

UnifyResult unifiable(const std::vector<Equation>& eqs) { return Solver().run(eqs, false); }

}  // namespace schematic
