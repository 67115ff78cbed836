// Shared drivers for the randomized suites, used by both the unit tests
// and the acceptance binary.

#ifndef SLICENET_TESTS_HARNESS_HPP_
#define SLICENET_TESTS_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "slicenet/model.hpp"
#include "slicenet/placement.hpp"

namespace slicenet::testing {

InventorySnapshot fresh_snapshot(const Inventory& inv);

struct OracleSuiteResult {
  int total = 0;
  int oracle_feasible = 0;
  int heuristic_feasible = 0;
  int agreements = 0;
  int invalid_plans = 0;
  int unsound = 0;  // heuristic plans on provably infeasible instances
  std::vector<int> gap_instances;
  std::vector<std::string> problems;

  double agreement_pct() const {
    return total ? 100.0 * agreements / total : 100.0;
  }
};

OracleSuiteResult run_oracle_suite(int total, std::uint64_t seed);

struct ConservationFuzzResult {
  int sequences = 0;
  int sequences_with_activity = 0;
  std::vector<std::string> violations;
};

ConservationFuzzResult run_conservation_fuzz(int sequences,
                                             std::uint64_t seed);

struct IsolationFuzzResult {
  int records = 0;
  int deliveries = 0;
  int denials = 0;
  int leaks = 0;  // deliveries without a matching ACTIVE rule
  int local_only_exports = 0;
  std::vector<std::string> problems;
};

IsolationFuzzResult run_isolation_fuzz(int records, std::uint64_t seed);

}  // namespace slicenet::testing

#endif  // SLICENET_TESTS_HARNESS_HPP_
