#include "schematic/oracle.hpp"

#include <limits>

namespace schematic {

OracleReport bounded_check(const SchematicProblem& p, unsigned n, uint64_t node_cap) {
  OracleReport rep;
  std::vector<Equation> cur = p.equations;
  for (unsigned i = 0; i <= n; ++i) {
    if (i > 0)
      for (auto& e : cur) {
        e.lhs = schematic::apply(t_substitution(p.schema, e.lhs), e.lhs);
        e.rhs = schematic::apply(t_substitution(p.schema, e.rhs), e.rhs);
      }
    InstanceSize sz;
    for (const auto& e : cur) {
      uint64_t add = e.lhs.size() + e.rhs.size();
      if (add < e.lhs.size()) add = std::numeric_limits<uint64_t>::max();
      sz.nodes = sz.nodes + add < sz.nodes ? std::numeric_limits<uint64_t>::max() : sz.nodes + add;
      sz.depth = std::max({sz.depth, e.lhs.depth(), e.rhs.depth()});
    }
    if (sz.nodes > node_cap) {
      rep.size_capped_at = i;
      break;
    }
    sz.vars = vars_of(cur).size();
    rep.per_instance_sizes.push_back(sz);
    UnifyResult u = unifiable(cur);
    rep.failed.push_back(!u.ok());
    if (!u.ok() && !rep.first_failure) rep.first_failure = OracleFailure{i, u.failure};
    rep.checked_up_to = i;
  }
  return rep;
}

}  // namespace schematic
