#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schematic/solver.hpp"

namespace schematic {

struct InstanceSize {
  uint64_t nodes = 0;
  unsigned depth = 0;
  size_t vars = 0;
};

struct OracleFailure {
  unsigned instance = 0;
  Failure cause = Failure::Clash;
};

struct OracleReport {
  // Highest instance actually checked; absent when even instance 0 was capped.
  std::optional<unsigned> checked_up_to;
  std::optional<OracleFailure> first_failure;
  std::vector<InstanceSize> per_instance_sizes;
  std::vector<bool> failed;  // per checked instance
  std::optional<unsigned> size_capped_at;
};

constexpr uint64_t kDefaultNodeCap = 200000;
constexpr unsigned kDefaultOracleDepth = 25;

// Instantiates U(i) directly for i = 0..n and runs plain unification.
OracleReport bounded_check(const SchematicProblem& p, unsigned n,
                           uint64_t node_cap = kDefaultNodeCap);

}  // namespace schematic
