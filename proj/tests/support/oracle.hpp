// Test-side oracles, independent of the production placement path:
//  - an exhaustive feasibility search over all VF->node assignments,
//  - an independent validator for returned plans,
//  - a seeded generator for small random instances.
// Route latencies are recomputed here with Floyd-Warshall instead of the
// production Dijkstra so the two sides share no code.

#ifndef SLICENET_TESTS_ORACLE_HPP_
#define SLICENET_TESTS_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "slicenet/model.hpp"
#include "slicenet/placement.hpp"

namespace slicenet::testing {

struct OracleInstance {
  Inventory inventory;
  SliceBlueprint blueprint;
};

// All-pairs site latency table built by Floyd-Warshall over the WAN graph,
// plus the unique tree path per pair for bandwidth accounting.
struct SiteTopology {
  std::vector<std::string> sites;
  std::map<std::string, int> index;
  std::vector<std::vector<double>> wan_latency;  // inf when disconnected
  std::vector<std::vector<std::vector<std::pair<std::string, std::string>>>>
      paths;  // canonical-pair hops

  static SiteTopology build(const Inventory& inv);
  std::optional<double> end_to_end_latency(const Inventory& inv,
                                           const std::string& site_a,
                                           const std::string& site_b) const;
};

// True iff some assignment of every VF to a node satisfies all constraints
// (componentwise capacity, instance caps, site radio pools, affinities,
// equipment pins, link latency and WAN bandwidth).
bool exhaustive_feasible(const OracleInstance& instance);

// Checks a concrete plan against the same constraint set from scratch.
// Returns violation messages; empty means valid.
std::vector<std::string> validate_plan(const OracleInstance& instance,
                                       const PlacementPlan& plan);

// Small random instances: <=3 sites, <=4 nodes, <=6 VFs, tree WAN.
OracleInstance random_instance(std::mt19937_64& rng);

}  // namespace slicenet::testing

#endif  // SLICENET_TESTS_ORACLE_HPP_
