#ifndef SLICENET_PLACEMENT_HPP_
#define SLICENET_PLACEMENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slicenet/model.hpp"
#include "slicenet/resources.hpp"

namespace slicenet {

// Immutable residual view the placement heuristic works against. Built by
// the orchestrator from current reservations; also constructible directly
// in tests.
struct SnapshotNode {
  std::string id;
  std::string site_id;
  ResourceVector residual;  // capacity minus reserved (radio keys unused)
  int free_instance_slots = 0;
};

struct SnapshotSite {
  std::string id;
  double intra_site_latency_ms = 0;
  std::map<Rat, std::int64_t> radio_residual;
  bool local_core = false;
};

struct SnapshotWanEdge {
  std::string site_a;  // canonical: site_a < site_b
  std::string site_b;
  double latency_ms = 0;
  std::int64_t bandwidth_residual = 0;
};

struct SnapshotEquipment {
  std::string id;
  std::string site_id;
  int free_vcontroller_slots = 0;
};

struct InventorySnapshot {
  std::map<std::string, SnapshotNode> nodes;
  std::map<std::string, SnapshotSite> sites;
  std::map<std::pair<std::string, std::string>, SnapshotWanEdge> wan;
  std::map<std::string, SnapshotEquipment> equipment;

  const SnapshotWanEdge* find_edge(const std::string& a,
                                   const std::string& b) const;
};

// A WAN hop as traversed (ordered); reservations key on the canonical pair.
struct RouteHop {
  std::string site_a;
  std::string site_b;
};

struct LinkRoute {
  double latency_ms = 0;
  std::int64_t bandwidth_mbps = 0;  // reserved on every WAN hop
  std::vector<RouteHop> wan_hops;   // empty for intra-site routes
};

struct PlacementPlan {
  std::map<std::string, std::string> assignments;  // VF name -> node id
  // equipment id -> vController id; values are empty until admission
  // allocates the controllers.
  std::map<std::string, std::string> vcontroller_allocs;
  std::map<int, LinkRoute> link_routes;  // key: index into blueprint.vlinks

  bool empty() const { return assignments.empty() && link_routes.empty(); }
};

enum class RejectReason {
  INSUFFICIENT_CAPACITY,
  LATENCY_UNSATISFIABLE,
  EQUIPMENT_EXHAUSTED,
  RADIO_EXHAUSTED
};

const char* reject_reason_name(RejectReason reason);

struct PlacementFailure {
  RejectReason reason = RejectReason::INSUFFICIENT_CAPACITY;
  std::string detail;
};

using PlaceResult = std::variant<PlacementPlan, PlacementFailure>;

inline bool placed(const PlaceResult& r) {
  return std::holds_alternative<PlacementPlan>(r);
}

// Lowest-latency site-to-site path over the WAN graph. Deterministic:
// ties broken toward the lexicographically smaller predecessor site.
// Returns nullopt when the sites are disconnected.
std::optional<LinkRoute> route_between_sites(const InventorySnapshot& snap,
                                             const std::string& site_a,
                                             const std::string& site_b);

// End-to-end latency for endpoints resolved to sites: intra-site latency
// when equal, intra(a) + WAN path + intra(b) otherwise.
std::optional<double> route_latency(const InventorySnapshot& snap,
                                    const std::string& site_a,
                                    const std::string& site_b);

// First-fit-decreasing placement with latency-driven co-siting:
//  1. VFs joined by links tighter than the minimum WAN latency are grouped
//     into same-site clusters; equipment bindings and site affinities pin
//     clusters to sites.
//  2. Clusters placed largest first; VFs within a cluster by scalar demand
//     descending (name ascending on ties).
//  3. Nodes ranked by residual scalar capacity descending, id ascending,
//     re-evaluated after every assignment; first fitting node wins.
//  4. Every link is routed over the WAN path and checked for latency and
//     bandwidth; radio units are drawn from the VF's site.
// Any failure yields a PlacementFailure with the dominant reason.
PlaceResult place(const SliceBlueprint& bp, const InventorySnapshot& snap);

// Placement for a reconfiguration delta: `adds` join a slice whose existing
// VFs already sit on `existing_assignment` nodes. Links between added VFs
// are taken from `add_links`; links from an added VF to an existing VF or
// equipment pin/route against the existing placement. Routes for all
// entries of `add_links` are returned keyed by their index.
PlaceResult place_additions(
    const std::vector<VFSpec>& adds, const std::vector<VLinkSpec>& add_links,
    const std::map<std::string, std::string>& existing_assignment,
    const InventorySnapshot& snap);

}  // namespace slicenet

#endif  // SLICENET_PLACEMENT_HPP_
