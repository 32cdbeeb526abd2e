#include "schematic/engine.hpp"

#include <deque>
#include <set>

namespace schematic {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Clash: return "clash";
    case Verdict::Cycle: return "cycle";
  }
  return "?";
}

std::vector<Equation> rule_decompose(const Equation& eq) {
  std::vector<Equation> out;
  for (size_t i = 0; i < eq.lhs.arity(); ++i) {
    Equation e{eq.lhs.args()[i], eq.rhs.args()[i]};
    if (!e.reflexive()) out.push_back(e);
  }
  return out;
}

Equation rule_orient1(const Equation& eq) { return eq.flipped(); }

std::optional<Equation> rule_orient2(const EqSet& active, const Equation& eq) {
  if (!eq.lhs.is_var() || !eq.rhs.is_var() || eq.reflexive()) return std::nullopt;
  if (active.count(eq.flipped())) return std::nullopt;
  return eq.flipped();
}

std::optional<Equation> rule_transitive(const Equation& eq1, const Equation& eq2) {
  if (!eq1.lhs.is_var() || eq1.lhs != eq2.lhs || eq1.rhs == eq2.rhs) return std::nullopt;
  return Equation{eq1.rhs, eq2.rhs};
}

bool clashes(const Equation& eq) {
  return !eq.lhs.is_var() && !eq.rhs.is_var() &&
         (eq.lhs.head() != eq.rhs.head() || eq.lhs.arity() != eq.rhs.arity());
}

bool theta_reaches(const Schema& s, const Var& z, const Var& y) {
  if (!s.contains(z)) return false;
  if (z == y) return true;
  // Unfolding never lowers an index, so domain variables above idx(y)
  // cannot lead to y.
  std::set<Var> seen{z};
  std::deque<Var> todo{z};
  while (!todo.empty()) {
    Var w = todo.front();
    todo.pop_front();
    for (const auto& v : vars_of(s.binding(w))) {
      if (v == y) return true;
      if (s.contains(v) && v.idx <= y.idx && seen.insert(v).second) todo.push_back(v);
    }
  }
  return false;
}

bool store_eligible(const EqSet& store, const Equation& eq, const Schema& s) {
  if (!eq.lhs.is_var()) return false;
  const Var& y = eq.lhs.as_var();
  const Term& r = eq.rhs;
  if (s.contains(y)) return !r.is_var() || s.contains(r);  // condition 1
  for (const auto& st : store) {                          // condition 2
    if (occurs(y, st.rhs) || r == st.lhs || eq.lhs == st.lhs) return true;
  }
  for (const auto& z : vars_of(store))                    // condition 3
    if (s.contains(z) && theta_reaches(s, z, y)) return true;
  return false;
}

FinalConfiguration th_unif(const EqSet& eqs, const Schema& s, const RuleHook& hook) {
  return th_unif(std::vector<Equation>(eqs.begin(), eqs.end()), s, hook);
}

FinalConfiguration th_unif(const std::vector<Equation>& eqs, const Schema& s,
                           const RuleHook& hook) {
  FinalConfiguration fc;
  auto emit = [&](const char* rule, std::vector<Equation> in, std::vector<Equation> out) {
    ++fc.rule_applications;
    if (hook) hook(RuleEvent{rule, std::move(in), std::move(out)});
  };

  EqSet& active = fc.active;
  std::vector<Equation> changes;
  for (const auto& e : eqs) {
    if (e.reflexive()) continue;
    if (active.insert(e).second) changes.push_back(e);
  }

  std::map<Var, std::vector<Equation>> var_dict;
  std::map<Var, EqSet> var_seen;

  for (;;) {
    for (const auto& e : changes) {
      if (clashes(e)) {
        emit("clash", {e}, {});
        fc.verdict = Verdict::Clash;
        fc.culprit = e;
        return fc;
      }
    }
    std::vector<Equation> orient1, decom, orient2;
    std::vector<std::pair<Equation, Equation>> trans;
    for (const auto& e : changes) {
      bool lv = e.lhs.is_var(), rv = e.rhs.is_var();
      if (!lv && rv) orient1.push_back(e);
      if (!lv && !rv) decom.push_back(e);
      if (lv && rv && !e.reflexive() && !active.count(e.flipped())) orient2.push_back(e);
      if (lv && var_seen[e.lhs.as_var()].insert(e).second) {
        auto& seen = var_dict[e.lhs.as_var()];
        for (const auto& old : seen) trans.emplace_back(e, old);
        seen.push_back(e);
      }
    }
    changes.clear();
    if (orient1.empty() && decom.empty() && orient2.empty() && trans.empty()) break;

    auto add = [&](const Equation& e, std::vector<Equation>& produced) {
      if (e.reflexive()) return;
      if (active.insert(e).second) {
        changes.push_back(e);
        produced.push_back(e);
      }
    };

    for (const auto& e : orient1) {
      if (!active.count(e)) continue;
      active.erase(e);
      std::vector<Equation> produced;
      add(rule_orient1(e), produced);
      emit("orient1", {e}, produced);
    }
    for (const auto& e : decom) {
      if (!active.count(e)) continue;
      active.erase(e);
      std::vector<Equation> produced;
      for (const auto& d : rule_decompose(e)) add(d, produced);
      emit("decompose", {e}, produced);
    }
    for (const auto& e : orient2) {
      if (auto f = rule_orient2(active, e)) {
        std::vector<Equation> produced;
        add(*f, produced);
        emit("orient2", {e}, produced);
      }
    }
    for (const auto& [e1, e2] : trans) {
      if (auto t = rule_transitive(e1, e2)) {
        std::vector<Equation> produced;
        add(*t, produced);
        emit("transitive", {e1, e2}, produced);
      }
    }
  }

  // Store every eligible equation in rounds until nothing moves.
  for (;;) {
    std::vector<Equation> batch;
    for (const auto& e : active)
      if (store_eligible(fc.store, e, s)) batch.push_back(e);
    if (batch.empty()) break;
    for (const auto& e : batch) {
      active.erase(e);
      fc.store.insert(e);
      emit("store", {e}, {e});
    }
  }

  std::vector<Equation> all(fc.store.begin(), fc.store.end());
  all.insert(all.end(), active.begin(), active.end());
  UnifyResult u = unifiable(all);
  if (!u.ok()) {
    fc.verdict = u.failure == Failure::Clash ? Verdict::Clash : Verdict::Cycle;
    fc.culprit = u.culprit;
    emit("gate", all, {});
  }
  return fc;
}

}  // namespace schematic
