#ifndef SLICENET_ORCHESTRATOR_HPP_
#define SLICENET_ORCHESTRATOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slicenet/emu.hpp"
#include "slicenet/federation.hpp"
#include "slicenet/model.hpp"
#include "slicenet/placement.hpp"

namespace slicenet {

enum class SliceState {
  REQUESTED,
  ADMITTED,
  PLACING,
  INSTANTIATING,
  ACTIVE,
  RECONFIGURING,
  TERMINATING,
  TERMINATED,
  REJECTED
};

const char* slice_state_name(SliceState s);
SliceState slice_state_from_name(const std::string& name);

// Legal lifecycle transitions. INSTANTIATING->REJECTED covers the spawn
// rollback path; every other edge follows the nominal lifecycle.
bool legal_transition(SliceState from, SliceState to);

struct Slice {
  std::string id;
  SliceBlueprint blueprint;
  SliceState state = SliceState::REQUESTED;
  std::optional<PlacementPlan> plan;
  std::vector<std::string> instances;    // VFInstance ids
  std::vector<std::string> federations;  // FederationLink ids
  std::optional<double> response_time_s;
  LogicalTime arrival = 0;
  std::optional<RejectReason> reject_reason;
};

enum class GrantAction { MONITOR, RECONFIGURE, MAINTAIN };

const char* grant_action_name(GrantAction a);
GrantAction grant_action_from_name(const std::string& name);

// Control without ownership: a grantor hands scoped actions to a grantee
// until a logical expiry time.
struct DelegationGrant {
  std::string id;
  std::string grantor;
  std::string grantee;
  std::set<std::string> scope;  // equipment ids and slice ids
  std::set<GrantAction> actions;
  LogicalTime expiry = 0;
};

struct ReconfigureDelta {
  std::vector<VFSpec> add_vfs;
  std::vector<std::string> remove_vfs;
  std::vector<VLinkSpec> updated_vlinks;
};

struct ReconfigureOutcome {
  bool ok = false;
  std::string detail;  // INFEASIBLE_DELTA detail when !ok
};

struct OrchestratorConfig {
  double orchestration_overhead_s = 0.2;
  // Admission-time capacity multiplier; 1.0 means no over-subscription.
  double oversubscription = 1.0;
  LatencyModelParams params = default_params();
  bool realtime = false;
  std::string event_log_path;  // when set, events are appended to this file
};

// The Orchestration Plane. Every state-mutating operation runs through a
// single serialized decision point; callers needing concurrency (the HTTP
// service) hold one lock around these methods and read from snapshots.
class Orchestrator {
 public:
  explicit Orchestrator(Inventory inventory, OrchestratorConfig config = {});

  // --- admission -------------------------------------------------------

  // Validates and enqueues a request; no resources touched. Returns the
  // request id (also the slice id). Throws ValidationError.
  std::string submit(const SliceBlueprint& blueprint,
                     std::optional<LogicalTime> arrival = std::nullopt);

  // Deterministic total order: arrival ascending, id ascending.
  static std::vector<std::string> order_requests(
      const std::vector<std::pair<LogicalTime, std::string>>& pending);

  // Admits every pending request in order_requests order. Returns the
  // processed ids; outcomes land on the slices (ADMITTED or REJECTED).
  std::vector<std::string> process_pending();

  // Drives ADMITTED -> PLACING -> INSTANTIATING -> ACTIVE, spawning VF
  // instances per node in parallel (max composition under virtual time).
  // A spawn failure rolls the slice back to REJECTED with all resources
  // released. Returns the slice.
  const Slice& instantiate(const std::string& slice_id,
                           SpawnMode mode = SpawnMode::WITH_VF);

  // --- runtime ---------------------------------------------------------

  // All-or-nothing reconfiguration of an ACTIVE slice. Additions are
  // placed against current residuals; removals always release resources.
  // An infeasible delta leaves the slice byte-identical.
  ReconfigureOutcome reconfigure(const std::string& slice_id,
                                 const ReconfigureDelta& delta,
                                 const std::string& caller);

  // Tears down instances, frees vControllers, closes federations, and
  // restores residuals exactly. Throws NotFoundError on unknown or
  // already-terminated slices.
  const Slice& terminate(const std::string& slice_id,
                         const std::string& caller);

  // --- equipment slicing / delegation ----------------------------------

  VController bind_vcontroller(const std::string& equipment_id,
                               const std::string& slice_id);

  std::string delegate(const DelegationGrant& grant);

  bool authorize(const std::string& tenant, GrantAction action,
                 const std::string& target) const;

  // --- federation (validated here, evaluated by the engine) ------------

  FederationLink& create_federation(const std::string& exporter_slice,
                                    const std::string& importer_slice,
                                    const std::vector<SFIRule>& rules,
                                    const std::string& caller);
  FederationLink& consent_federation(const std::string& link_id,
                                     const std::string& tenant);

  // --- queries ---------------------------------------------------------

  const Slice* find_slice(const std::string& id) const;
  const Slice& slice(const std::string& id) const;  // NotFoundError
  const Inventory& inventory() const { return inventory_; }
  const OrchestratorConfig& config() const { return config_; }
  Emulator& emu() { return emu_; }
  const Emulator& emu() const { return emu_; }
  FederationEngine& federation() { return federation_; }
  const FederationEngine& federation() const { return federation_; }
  const std::map<std::string, DelegationGrant>& grants() const {
    return grants_;
  }
  const std::map<std::string, std::vector<VController>>& vcontrollers() const {
    return vcontrollers_;
  }
  std::vector<std::pair<LogicalTime, std::string>> pending() const;

  LogicalTime now() const { return clock_; }
  LogicalTime tick() { return ++clock_; }

  // Residual view of the current reservations (placement input).
  InventorySnapshot build_snapshot() const;

  // Resource-state snapshot as canonical JSON text: inventory books,
  // running instances, vControllers, live slices, grants and open
  // federations. Logs and id counters are excluded.
  std::string snapshot_json() const;
  static Orchestrator from_snapshot(const std::string& snapshot_text,
                                    OrchestratorConfig config = {});

  // Append-only transition log, one record per line:
  //   <timestamp>\t<slice>\t<from>-><to>\t<reason>
  const std::vector<std::string>& event_log() const { return events_; }
  std::string event_log_text() const;

  // Full invariant sweep over the current state; empty means healthy.
  std::vector<std::string> check_invariants() const;

 private:
  void append_event(std::string line);
  void transition(Slice& slice, SliceState to, const std::string& reason);
  void admit_one(const std::string& request_id);
  void commit_reservations(const Slice& slice, int direction);
  std::string site_of_node(const std::string& node_id) const;
  VController& bind_vcontroller_internal(const std::string& equipment_id,
                                         const std::string& slice_id,
                                         const std::string& owner);
  void release_vcontrollers(const std::string& slice_id);
  void create_blueprint_federations(Slice& slice);
  bool owns(const std::string& tenant, const std::string& target) const;

  Inventory inventory_;
  OrchestratorConfig config_;
  Emulator emu_;
  FederationEngine federation_;

  std::map<std::string, Slice> slices_;
  std::vector<std::string> pending_;

  struct NodeBook {
    ResourceVector reserved;
    int reserved_count = 0;
  };
  std::map<std::string, NodeBook> node_book_;
  std::map<std::string, std::map<Rat, std::int64_t>> site_radio_reserved_;
  std::map<std::pair<std::string, std::string>, std::int64_t> wan_reserved_;
  std::map<std::string, std::vector<VController>> vcontrollers_;
  std::map<std::string, DelegationGrant> grants_;

  std::vector<std::string> events_;
  LogicalTime clock_ = 0;
  std::uint64_t next_slice_ = 1;
  std::uint64_t next_vcontroller_ = 1;
  std::uint64_t next_grant_ = 1;
};

}  // namespace slicenet

#endif  // SLICENET_ORCHESTRATOR_HPP_
