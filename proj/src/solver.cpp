#include "schematic/solver.hpp"

#include <algorithm>
#include <map>

namespace schematic {

std::string to_string(Cause c) {
  switch (c) {
    case Cause::Clash: return "clash";
    case Cause::Cycle: return "cycle";
    case Cause::IrrCycle: return "irr-cycle";
  }
  return "?";
}

std::string to_string(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Cycle: return "cycle";
    case Outcome::Kind::NotUnifiable: return "not-unifiable";
    case Outcome::Kind::StabilityViolation: return "stability-violation";
    case Outcome::Kind::Exhausted: return "exhausted";
  }
  return "?";
}

std::vector<Equation> instance_problem(const SchematicProblem& p, unsigned i) {
  std::vector<Equation> out;
  out.reserve(p.equations.size());
  for (const auto& e : p.equations)
    out.push_back({instance(p.schema, e.lhs, i), instance(p.schema, e.rhs, i)});
  return out;
}

Substitution step_substitution(const EqSet& store, const Schema& s) {
  Substitution psi;
  for (const auto& v : vars_of(store))
    if (s.contains(v)) psi.bind(v, s.binding(v));
  return psi;
}

EqSet irrelevant_set(const EqSet& /*store*/, const EqSet& active, const Schema& s) {
  EqSet out;
  for (const auto& e : active)
    if (e.lhs.is_var() && !s.contains(e.lhs)) out.insert(e);
  return out;
}

ChcResult cycle_check(const EqSet& irr, const Schema& s) {
  ChcResult res;
  std::vector<Equation> cur(irr.begin(), irr.end());
  if (cur.empty()) return res;

  unsigned i_max = 0;
  std::optional<unsigned> r_min;
  for (const auto& e : cur) {
    if (e.lhs.is_var()) i_max = std::max(i_max, e.lhs.as_var().idx);
    for (const auto& v : vars_of(e.rhs))
      if (s.contains(v)) r_min = r_min ? std::min(*r_min, v.idx) : v.idx;
  }
  if (r_min && i_max + 1 > *r_min) res.v_gap = i_max + 1 - *r_min;

  for (unsigned k = 0; k < res.v_gap; ++k) {
    Substitution step;
    for (const auto& e : cur)
      for (const auto& v : vars_of(e.rhs))
        if (s.contains(v)) step.bind(v, s.binding(v));
    if (step.empty()) break;
    for (auto& e : cur) e.rhs = schematic::apply(step, e.rhs);
  }
  UnifyResult u = unifiable(cur);
  res.ok = u.ok();
  res.culprit = u.culprit;
  res.unfolded = std::move(cur);
  return res;
}

EqFr compute_eq_fr(const EqSet& store, const Substitution& step_sub, const Schema& s) {
  EqFr out;

  // classes of variables tied by symmetric pairs x = y, y = x
  std::map<Var, Var> parent;
  auto find = [&](Var v) {
    while (parent.count(v) && parent[v] != v) v = parent[v];
    return v;
  };
  for (const auto& e : store) {
    if (!e.lhs.is_var() || !e.rhs.is_var() || e.reflexive()) continue;
    if (!store.count(e.flipped())) continue;
    Var a = find(e.lhs.as_var()), b = find(e.rhs.as_var());
    parent.try_emplace(a, a);
    parent.try_emplace(b, b);
    if (a != b) parent[a] = b;
  }
  std::map<Var, std::vector<Var>> classes;
  for (const auto& [v, _] : parent) classes[find(v)].push_back(v);
  for (const auto& [_, members] : classes) {
    // largest index; among equal indices the least symbol
    Var rep = members.front();
    for (const auto& v : members)
      if (v.idx > rep.idx || (v.idx == rep.idx && v.sym < rep.sym)) rep = v;
    for (const auto& v : members)
      if (v != rep) out.eq_sub.bind(v, Term::var(rep));
  }

  std::map<std::string, unsigned> least_by_sym;  // least index per psi symbol
  for (const auto& [y, _] : step_sub) {
    auto it = least_by_sym.find(y.sym);
    if (it == least_by_sym.end() || y.idx < it->second) least_by_sym[y.sym] = y.idx;
  }
  for (const auto& x : vars_of(store)) {
    if (s.contains(x)) continue;
    for (const auto& [ysym, yidx] : least_by_sym) {
      if (x.idx >= yidx && var_sets(s.base(ysym)).cls.count(x.sym)) {
        out.fr.insert(x);
        break;
      }
    }
  }
  return out;
}

std::set<Var> irrelevant_vars(const EqSet& irr, const EqSet& store, const Schema& s) {
  std::set<Var> in_store = vars_of(store), out;
  for (const auto& v : vars_of(irr))
    if (!s.contains(v) && !in_store.count(v)) out.insert(v);
  return out;
}

unsigned max_index(const std::vector<Equation>& eqs) {
  unsigned m = 0;
  for (const auto& v : vars_of(eqs)) m = std::max(m, v.idx);
  return m;
}

unsigned max_depth(const std::vector<Equation>& eqs) {
  unsigned m = 0;
  for (const auto& e : eqs) m = std::max({m, e.lhs.depth(), e.rhs.depth()});
  return m;
}

unsigned stab_index(const std::vector<Equation>& u0, const Substitution& psi0) {
  std::vector<Equation> applied;
  for (const auto& e : u0) applied.push_back(schematic::apply(psi0, e));
  return std::max(max_index(applied), max_depth(applied));
}

unsigned stab_index(const SchematicProblem& p) {
  auto u0 = instance_problem(p, 0);
  auto fc = th_unif(u0, p.schema);
  if (fc.verdict != Verdict::Ok) throw SchemaError("instance 0 is not unifiable");
  return stab_index(u0, step_substitution(fc.store, p.schema));
}

long reference_metric(const std::vector<long>& history, unsigned stab) {
  long best = history.at(0);
  for (size_t k = 1; k < history.size() && k <= stab; ++k) best = std::max(best, history[k]);
  return best;
}

bool stable(long metric, long reference) { return metric <= reference; }

std::optional<double> stability_ratio(long metric, long reference) {
  if (reference <= 0) return std::nullopt;
  return static_cast<double>(metric) / static_cast<double>(reference);
}

std::optional<Substitution> check_for_map(const std::set<Var>& fr1, const EqSet& ns1,
                                          const std::set<Var>& fr2, const EqSet& ns2,
                                          const Schema& /*s*/) {
  if (ns1.size() < ns2.size()) return std::nullopt;
  std::set<Var> v1 = vars_of(ns1), v2 = vars_of(ns2);
  std::vector<Var> order(v1.begin(), v1.end());  // (symbol, index) order
  std::map<Var, size_t> pos;
  for (size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

  // equations of ns1 indexed by the position of their last-assigned variable
  std::vector<std::vector<Equation>> ready(order.size());
  std::vector<Equation> ground;
  for (const auto& e : ns1) {
    auto vs = vars_of(e.lhs);
    collect_vars(e.rhs, vs);
    if (vs.empty()) {
      ground.push_back(e);
      continue;
    }
    size_t last = 0;
    for (const auto& v : vs) last = std::max(last, pos[v]);
    ready[last].push_back(e);
  }
  for (const auto& e : ground)
    if (!ns2.count(e)) return std::nullopt;

  std::vector<std::vector<Var>> cands(order.size());
  for (size_t k = 0; k < order.size(); ++k) {
    const Var& x = order[k];
    if (v2.count(x)) {
      if (!fr1.count(x) || fr2.count(x)) cands[k].push_back(x);
      continue;
    }
    for (const auto& y : v2)
      if (y.sym == x.sym && (!fr1.count(x) || fr2.count(y))) cands[k].push_back(y);
  }

  Substitution mu;
  std::function<bool(size_t)> search = [&](size_t k) -> bool {
    if (k == order.size()) {
      EqSet image;
      for (const auto& e : ns1) image.insert(schematic::apply(mu, e));
      return image == ns2;
    }
    for (const auto& y : cands[k]) {
      mu.bind(order[k], Term::var(y));
      bool ok = true;
      for (const auto& e : ready[k])
        if (!ns2.count(schematic::apply(mu, e))) {
          ok = false;
          break;
        }
      if (ok && search(k + 1)) return true;
    }
    mu.bind(order[k], Term::var(order[k]));  // unbind
    return false;
  };
  if (!search(0)) return std::nullopt;
  return mu;
}

bool var_disjoint(const std::set<Var>& fr1, const EqSet& ns1, const std::set<Var>& fr2,
                  const EqSet& ns2, const Schema& /*s*/) {
  std::set<Var> v2 = vars_of(ns2);
  for (const auto& v : vars_of(ns1))
    if (v2.count(v) && (fr1.count(v) || fr2.count(v))) return false;
  for (const auto& v : fr1)
    if (fr2.count(v)) return false;
  return true;
}

unsigned default_cap(const SchematicProblem& p, unsigned stab) {
  return 10 * (stab + static_cast<unsigned>(p.schema.rules().size() + p.equations.size()));
}

std::string to_string(CycleGuard g) {
  switch (g) {
    case CycleGuard::RawDisjoint: return "raw-disjoint";
    case CycleGuard::IndexGap: return "index-gap";
    case CycleGuard::Either: return "either";
  }
  return "?";
}

namespace {

EqSet collapse(const EqSet& ns, const Substitution& eq_sub) {
  EqSet out;
  for (const auto& e : ns) {
    Equation c = schematic::apply(eq_sub, e);
    if (!c.reflexive()) out.insert(c);
  }
  return out;
}

Cause cause_of(Verdict v) { return v == Verdict::Cycle ? Cause::Cycle : Cause::Clash; }

}  // namespace

SolveResult u_sch_unif(const SchematicProblem& input, const SolveOptions& opts) {
  if (mutually_recursive(input.schema))
    throw SchemaError("mutually recursive schema is not supported");
  SolveResult res;
  PrimitiveForm pf = make_primitive(input.equations, input.schema);
  res.primitive = {pf.equations, pf.schema};
  res.sigma = pf.sigma;
  const Schema& th = res.primitive.schema;

  auto fail = [&](unsigned i, Cause c, std::optional<Equation> culprit) {
    res.outcome.kind = Outcome::Kind::NotUnifiable;
    res.outcome.instance = i;
    res.outcome.cause = c;
    res.outcome.culprit = std::move(culprit);
    return res;
  };

  std::vector<long> metrics, printed;

  auto finish_record = [&](InstanceRecord& rec) {
    EqFr ef = compute_eq_fr(rec.store, rec.step_sub, th);
    rec.eq_sub = ef.eq_sub;
    rec.fr = ef.fr;
    for (const auto& e : rec.store) rec.normalized_store.insert({e.lhs, normalize(th, e.rhs)});
    rec.collapsed = collapse(rec.normalized_store, rec.eq_sub);
    rec.irr_vars = irrelevant_vars(rec.irr, rec.store, th);
    long live = static_cast<long>(vars_of(schematic::apply(rec.eq_sub, rec.normalized_store)).size());
    rec.metric = live - static_cast<long>(rec.irr_vars.size());
    long direct = static_cast<long>(vars_of(instance_problem(res.primitive, rec.i)).size());
    rec.printed_metric = direct - static_cast<long>(rec.eq_sub.size()) -
                         static_cast<long>(rec.irr_vars.size());
    metrics.push_back(rec.metric);
    printed.push_back(rec.printed_metric);
  };

  // instance 0
  auto u0 = instance_problem(res.primitive, 0);
  FinalConfiguration fc = th_unif(u0, th);
  if (fc.verdict != Verdict::Ok) return fail(0, cause_of(fc.verdict), fc.culprit);
  InstanceRecord rec0;
  rec0.i = 0;
  rec0.store = fc.store;
  rec0.active = fc.active;
  rec0.step_sub = step_substitution(fc.store, th);
  rec0.irr = irrelevant_set(fc.store, fc.active, th);
  const unsigned stab = stab_index(u0, rec0.step_sub);
  res.stab_index = stab;
  finish_record(rec0);
  res.records.push_back(rec0);
  if (opts.on_instance) opts.on_instance(res.records.back());

  const unsigned cap = opts.max_iterations.value_or(default_cap(res.primitive, stab));

  for (unsigned i = 1;; ++i) {
    if (i > cap) {
      res.outcome.kind = Outcome::Kind::Exhausted;
      res.outcome.cap = cap;
      return res;
    }
    const InstanceRecord& prev = res.records.back();
    fc = th_unif(schematic::apply(prev.step_sub, prev.store), th);
    if (fc.verdict != Verdict::Ok) return fail(i, cause_of(fc.verdict), fc.culprit);

    InstanceRecord rec;
    rec.i = i;
    rec.store = fc.store;
    rec.active = fc.active;
    rec.irr = schematic::apply(prev.step_sub, prev.irr);
    for (const auto& e : irrelevant_set(fc.store, fc.active, th)) rec.irr.insert(e);
    ChcResult chc = cycle_check(rec.irr, th);
    if (!chc.ok) return fail(i, Cause::IrrCycle, chc.culprit);
    rec.step_sub = step_substitution(rec.store, th);
    finish_record(rec);

    bool check = i >= stab;
    if (check) {
      long ref = reference_metric(metrics, stab);
      rec.ratio = stability_ratio(rec.metric, ref);
      rec.printed_ratio = stability_ratio(rec.printed_metric, reference_metric(printed, stab));
      if (!stable(rec.metric, ref)) {
        res.records.push_back(rec);
        if (opts.on_instance) opts.on_instance(res.records.back());
        res.outcome.kind = Outcome::Kind::StabilityViolation;
        res.outcome.instance = i;
        return res;
      }
    }
    res.records.push_back(rec);
    if (opts.on_instance) opts.on_instance(res.records.back());
    if (!check) continue;

    const InstanceRecord& cur = res.records.back();
    std::set<Var> cur_vars = vars_of(cur.store);
    for (unsigned j = 0; j < i; ++j) {
      const InstanceRecord& old = res.records[j];
      auto mu = check_for_map(cur.fr, cur.collapsed, old.fr, old.collapsed, th);
      if (!mu) continue;
      if (!var_disjoint(cur.fr, cur.collapsed, old.fr, old.collapsed, th)) continue;
      bool gap = i - j >= stab;
      bool disjoint = true;
      if (opts.guard != CycleGuard::IndexGap && !(opts.guard == CycleGuard::Either && gap))
        for (const auto& v : vars_of(old.store))
          if (cur_vars.count(v)) {
            disjoint = false;
            break;
          }
      bool pass = opts.guard == CycleGuard::RawDisjoint ? disjoint
                  : opts.guard == CycleGuard::IndexGap  ? gap
                                                        : disjoint || gap;
      if (!pass) continue;
      Outcome& o = res.outcome;
      o.kind = Outcome::Kind::Cycle;
      o.i = i;
      o.j = j;
      o.mapping = *mu;
      o.store_i = cur.store;
      o.store_j = old.store;
      o.eq_sub_i = cur.eq_sub;
      o.eq_sub_j = old.eq_sub;
      o.irr_i = cur.irr;
      return res;
    }
  }
}

}  // namespace schematic
