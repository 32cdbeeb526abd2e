#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schematic/schema.hpp"
#include "schematic/unify.hpp"

namespace schematic {

enum class Verdict { Ok, Clash, Cycle };
std::string to_string(Verdict v);

struct FinalConfiguration {
  EqSet store;
  EqSet active;
  Verdict verdict = Verdict::Ok;
  std::optional<Equation> culprit;
  size_t rule_applications = 0;
};

struct RuleEvent {
  std::string rule;  // orient1, decompose, orient2, transitive, store, clash, gate
  std::vector<Equation> consumed;
  std::vector<Equation> produced;
};

using RuleHook = std::function<void(const RuleEvent&)>;

// Single rule applications. Each returns the equations it produces.
std::vector<Equation> rule_decompose(const Equation& eq);  // reflexive ones dropped
Equation rule_orient1(const Equation& eq);
std::optional<Equation> rule_orient2(const EqSet& active, const Equation& eq);
std::optional<Equation> rule_transitive(const Equation& eq1, const Equation& eq2);

bool clashes(const Equation& eq);
bool store_eligible(const EqSet& store, const Equation& eq, const Schema& s);
// y in vars(instance(z, k)) for some k >= 0
bool theta_reaches(const Schema& s, const Var& z, const Var& y);

FinalConfiguration th_unif(const std::vector<Equation>& eqs, const Schema& s,
                           const RuleHook& hook = {});
FinalConfiguration th_unif(const EqSet& eqs, const Schema& s, const RuleHook& hook = {});

}  // namespace schematic
