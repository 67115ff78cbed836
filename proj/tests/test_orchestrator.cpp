#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <sstream>

#include "slicenet/json_io.hpp"
#include "slicenet/orchestrator.hpp"

using namespace slicenet;

namespace {

ResourceVector rv(std::int64_t cpu, std::int64_t mem = 0, std::int64_t sto = 0,
                  std::int64_t bw = 0) {
  ResourceVector v;
  v.cpu_millicores = cpu;
  v.memory_mb = mem;
  v.storage_mb = sto;
  v.bandwidth_mbps = bw;
  return v;
}

// Two sites (2 nodes + 1 node), one robot on each site, symmetric WAN.
Inventory demo_inventory() {
  Inventory inv;
  inv.tenants.push_back({"owner_a", TenantRole::PRODUCT_OWNER});
  inv.tenants.push_back({"owner_b", TenantRole::PRODUCT_OWNER});
  inv.tenants.push_back({"factory", TenantRole::PRODUCT_MANUFACTURER});
  inv.tenants.push_back({"operator", TenantRole::EXTERNAL_OPERATOR});
  for (int s = 0; s < 2; ++s) {
    Site site;
    site.id = "s" + std::to_string(s);
    site.owner = "factory";
    site.intra_site_latency_ms = 2.0;
    site.radio_capacity[Rat::URLLC] = 2;
    site.radio_capacity[Rat::NB_IOT] = 4;
    inv.sites.push_back(site);
  }
  inv.sites[0].wan_links.push_back({"s1", 20.0, 300});
  inv.sites[1].wan_links.push_back({"s0", 20.0, 300});
  auto add_node = [&](const std::string& id, const std::string& site) {
    EdgeNode n;
    n.id = id;
    n.site_id = site;
    n.capacity = rv(2000, 4096, 8000, 500);
    n.max_instances = 10;
    inv.nodes.push_back(n);
  };
  add_node("n0", "s0");
  add_node("n1", "s0");
  add_node("n2", "s1");
  Equipment arm;
  arm.id = "arm0";
  arm.site_id = "s0";
  arm.kind = EquipmentKind::ROBOT;
  arm.max_vcontrollers = 2;
  inv.equipment.push_back(arm);
  Equipment press;
  press.id = "press1";
  press.site_id = "s1";
  press.kind = EquipmentKind::PLC;
  press.max_vcontrollers = 1;
  inv.equipment.push_back(press);
  return inv;
}

SliceBlueprint simple_blueprint(const std::string& id, const std::string& tenant,
                                int vf_count, std::int64_t cpu) {
  SliceBlueprint bp;
  bp.id = id;
  bp.tenant_id = tenant;
  for (int i = 0; i < vf_count; ++i) {
    VFSpec vf;
    vf.name = "vf" + std::to_string(i);
    vf.demand = rv(cpu, 128, 0, 10);
    bp.vfs.push_back(vf);
  }
  return bp;
}

std::string activate(Orchestrator& orch, const SliceBlueprint& bp) {
  std::string id = orch.submit(bp);
  orch.process_pending();
  REQUIRE(orch.slice(id).state == SliceState::ADMITTED);
  orch.instantiate(id);
  REQUIRE(orch.slice(id).state == SliceState::ACTIVE);
  return id;
}

}  // namespace

TEST_CASE("submit validates and enqueues without touching resources") {
  Orchestrator orch(demo_inventory());
  std::string before = orch.snapshot_json();
  SliceBlueprint bp = simple_blueprint("bp", "owner_a", 2, 100);
  std::string id = orch.submit(bp);
  CHECK(orch.slice(id).state == SliceState::REQUESTED);
  CHECK(orch.pending().size() == 1);

  SliceBlueprint bad = bp;
  bad.vlinks.push_back({"vf0", "ghost", 0, 5.0});
  try {
    orch.submit(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "vlinks[0].endpoint_b");
  }

  SliceBlueprint dupe = bp;
  dupe.vfs.push_back(dupe.vfs[0]);
  CHECK_THROWS_AS(orch.submit(dupe), ValidationError);
}

TEST_CASE("order_requests: timestamp order, id tie-break, determinism") {
  std::vector<std::pair<LogicalTime, std::string>> pending{{2, "b"}, {1, "a"}};
  CHECK(Orchestrator::order_requests(pending) ==
        std::vector<std::string>{"a", "b"});
  std::vector<std::pair<LogicalTime, std::string>> tie{{1, "b"}, {1, "a"}};
  CHECK(Orchestrator::order_requests(tie) ==
        std::vector<std::string>{"a", "b"});
  CHECK(Orchestrator::order_requests(tie) == Orchestrator::order_requests(tie));
}

TEST_CASE("zero-demand blueprint is admitted on any non-empty inventory") {
  Orchestrator orch(demo_inventory());
  std::string id = orch.submit(simple_blueprint("bp", "owner_a", 0, 0));
  orch.process_pending();
  CHECK(orch.slice(id).state == SliceState::ADMITTED);
  CHECK(orch.slice(id).plan.has_value());
}

TEST_CASE("admission rejects over-capacity with INSUFFICIENT_CAPACITY") {
  Orchestrator orch(demo_inventory());
  // Sized to leave exactly 200 cpu free on every node.
  activate(orch, simple_blueprint("first", "owner_a", 3, 1800));
  std::string id = orch.submit(simple_blueprint("second", "owner_b", 1, 201));
  orch.process_pending();
  const Slice& slice = orch.slice(id);
  CHECK(slice.state == SliceState::REJECTED);
  CHECK(slice.reject_reason == RejectReason::INSUFFICIENT_CAPACITY);
  CHECK_FALSE(slice.plan.has_value());

  // Exactly the residual still fits.
  std::string ok = orch.submit(simple_blueprint("third", "owner_b", 1, 200));
  orch.process_pending();
  CHECK(orch.slice(ok).state == SliceState::ADMITTED);
}

TEST_CASE("admission rejects when equipment has no vController slot") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint bp = simple_blueprint("holder", "owner_a", 1, 100);
  bp.vfs[0].equipment_binding = "press1";  // max_vcontrollers = 1
  activate(orch, bp);

  SliceBlueprint second = simple_blueprint("wanter", "owner_b", 1, 100);
  second.vfs[0].equipment_binding = "press1";
  std::string id = orch.submit(second);
  orch.process_pending();
  CHECK(orch.slice(id).state == SliceState::REJECTED);
  CHECK(orch.slice(id).reject_reason == RejectReason::EQUIPMENT_EXHAUSTED);
}

TEST_CASE("admission reject reasons: radio and latency") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint radio_hog = simple_blueprint("radio", "owner_a", 1, 100);
  radio_hog.vfs[0].demand.radio_units[Rat::URLLC] = 5;  // sites hold 2 each
  std::string r = orch.submit(radio_hog);
  orch.process_pending();
  CHECK(orch.slice(r).state == SliceState::REJECTED);
  CHECK(orch.slice(r).reject_reason == RejectReason::RADIO_EXHAUSTED);

  SliceBlueprint too_tight = simple_blueprint("tight", "owner_a", 2, 100);
  too_tight.vlinks.push_back({"vf0", "vf1", 0, 1.0});  // intra latency is 2
  std::string t = orch.submit(too_tight);
  orch.process_pending();
  CHECK(orch.slice(t).state == SliceState::REJECTED);
  CHECK(orch.slice(t).reject_reason == RejectReason::LATENCY_UNSATISFIABLE);
}

TEST_CASE("reconfigure: updating a link re-reserves WAN bandwidth") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint bp = simple_blueprint("bp", "owner_a", 2, 200);
  bp.vfs[0].site_affinity = "s0";
  bp.vfs[1].site_affinity = "s1";
  bp.vlinks.push_back({"vf0", "vf1", 60, 50.0});
  std::string id = activate(orch, bp);
  auto wan_residual = [&orch] {
    return orch.build_snapshot().find_edge("s0", "s1")->bandwidth_residual;
  };
  CHECK(wan_residual() == 300 - 60);

  ReconfigureDelta delta;
  delta.updated_vlinks.push_back({"vf0", "vf1", 100, 50.0});
  REQUIRE(orch.reconfigure(id, delta, "owner_a").ok);
  CHECK(wan_residual() == 300 - 100);
  CHECK(orch.slice(id).blueprint.vlinks.size() == 1);
  CHECK(orch.slice(id).plan->link_routes.at(0).bandwidth_mbps == 100);
  CHECK(orch.check_invariants().empty());

  // An update beyond the edge capacity is refused and changes nothing.
  ReconfigureDelta monster;
  monster.updated_vlinks.push_back({"vf0", "vf1", 400, 50.0});
  CHECK_FALSE(orch.reconfigure(id, monster, "owner_a").ok);
  CHECK(wan_residual() == 300 - 100);

  orch.terminate(id, "owner_a");
  CHECK(wan_residual() == 300);
}

TEST_CASE("instantiate: plan touching zero nodes costs only the overhead") {
  Orchestrator orch(demo_inventory());
  std::string id = orch.submit(simple_blueprint("empty", "owner_a", 0, 0));
  orch.process_pending();
  const Slice& slice = orch.instantiate(id);
  CHECK(slice.state == SliceState::ACTIVE);
  CHECK(slice.response_time_s == doctest::Approx(0.2));
}

TEST_CASE("instantiate: parallel nodes compose by max (3 s, 5 s -> 5.2 s)") {
  OrchestratorConfig config;
  config.params.with_vf.alpha_s = 0;
  config.params.with_vf.beta_s_per_instance = 1.0;  // k instances -> k seconds
  config.orchestration_overhead_s = 0.2;
  Orchestrator orch(demo_inventory(), config);

  SliceBlueprint bp;
  bp.id = "split";
  bp.tenant_id = "owner_a";
  for (int i = 0; i < 3; ++i) {
    VFSpec vf;
    vf.name = "s0-vf" + std::to_string(i);
    vf.demand = rv(100);
    vf.site_affinity = "s0";
    bp.vfs.push_back(vf);
  }
  for (int i = 0; i < 5; ++i) {
    VFSpec vf;
    vf.name = "s1-vf" + std::to_string(i);
    vf.demand = rv(100);
    vf.site_affinity = "s1";
    bp.vfs.push_back(vf);
  }
  std::string id = orch.submit(bp);
  orch.process_pending();
  REQUIRE(orch.slice(id).state == SliceState::ADMITTED);
  // s1 has a single node: its 5 VFs spawn there (5 s); s0 spreads 3 VFs
  // over two nodes (2 s / 1 s). Join = max = 5 s, plus 0.2 s overhead.
  const Slice& slice = orch.instantiate(id);
  CHECK(slice.response_time_s == doctest::Approx(5.2));
}

TEST_CASE("spawn failure rolls the slice back to REJECTED, resources released") {
  Orchestrator orch(demo_inventory());
  // Fill node n2 to its instance cap behind the orchestrator's back.
  std::vector<SpawnSpec> filler;
  for (int i = 0; i < 10; ++i) {
    filler.push_back({"external", "x" + std::to_string(i), rv(1)});
  }
  orch.emu().spawn_batch("n2", filler, SpawnMode::EMPTY);
  std::string before = orch.snapshot_json();

  SliceBlueprint bp = simple_blueprint("victim", "owner_a", 1, 100);
  bp.vfs[0].site_affinity = "s1";  // n2 is the only node there
  std::string id = orch.submit(bp);
  orch.process_pending();
  REQUIRE(orch.slice(id).state == SliceState::ADMITTED);
  const Slice& slice = orch.instantiate(id);
  CHECK(slice.state == SliceState::REJECTED);
  CHECK_FALSE(slice.plan.has_value());
  CHECK(orch.snapshot_json() == before);
  CHECK(orch.check_invariants().empty());
}

TEST_CASE("reconfigure: remove-only always succeeds and frees resources") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 3, 300));
  ReconfigureDelta delta;
  delta.remove_vfs = {"vf1"};
  ReconfigureOutcome outcome = orch.reconfigure(id, delta, "owner_a");
  CHECK(outcome.ok);
  CHECK(orch.slice(id).blueprint.vfs.size() == 2);
  CHECK(orch.slice(id).plan->assignments.size() == 2);
  CHECK(orch.slice(id).state == SliceState::ACTIVE);
  CHECK(orch.check_invariants().empty());

  // Resources actually grew back: a slice of the freed size now fits.
  InventorySnapshot snap = orch.build_snapshot();
  std::int64_t total_residual = 0;
  for (const auto& [nid, node] : snap.nodes) {
    total_residual += node.residual.cpu_millicores;
  }
  CHECK(total_residual == 3 * 2000 - 2 * 300);
}

TEST_CASE("reconfigure: fitting addition lands, slice stays ACTIVE") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 2, 200));
  ReconfigureDelta delta;
  VFSpec extra;
  extra.name = "extra";
  extra.demand = rv(150, 64);
  delta.add_vfs.push_back(extra);
  delta.updated_vlinks.push_back({"extra", "vf0", 5, 200.0});
  ReconfigureOutcome outcome = orch.reconfigure(id, delta, "owner_a");
  CHECK(outcome.ok);
  CHECK(orch.slice(id).plan->assignments.count("extra") == 1);
  CHECK(orch.slice(id).blueprint.vlinks.size() == 1);
  CHECK(orch.slice(id).plan->link_routes.size() == 1);
  CHECK(orch.check_invariants().empty());
}

TEST_CASE("reconfigure: infeasible delta leaves byte-identical state") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 2, 200));
  std::string before = orch.snapshot_json();
  std::string events_before = orch.event_log_text();

  ReconfigureDelta delta;
  VFSpec monster;
  monster.name = "monster";
  monster.demand = rv(99999);
  delta.add_vfs.push_back(monster);
  ReconfigureOutcome outcome = orch.reconfigure(id, delta, "owner_a");
  CHECK_FALSE(outcome.ok);
  CHECK(outcome.detail.find("INSUFFICIENT_CAPACITY") != std::string::npos);
  CHECK(orch.snapshot_json() == before);
  CHECK(orch.event_log_text() == events_before);
}

TEST_CASE("reconfigure: caller without RECONFIGURE grant is rejected") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 1, 100));
  ReconfigureDelta delta;
  delta.remove_vfs = {"vf0"};
  CHECK_THROWS_AS(orch.reconfigure(id, delta, "owner_b"), UnauthorizedError);

  // A MONITOR-only grant is not enough.
  DelegationGrant grant;
  grant.grantor = "owner_a";
  grant.grantee = "owner_b";
  grant.scope = {id};
  grant.actions = {GrantAction::MONITOR};
  grant.expiry = 1000000;
  orch.delegate(grant);
  CHECK_THROWS_AS(orch.reconfigure(id, delta, "owner_b"), UnauthorizedError);

  // RECONFIGURE delegation unlocks it.
  DelegationGrant full = grant;
  full.actions = {GrantAction::RECONFIGURE};
  orch.delegate(full);
  CHECK(orch.reconfigure(id, delta, "owner_b").ok);
}

TEST_CASE("reconfigure bumps vController config versions") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint bp = simple_blueprint("bp", "owner_a", 1, 100);
  bp.vfs[0].equipment_binding = "arm0";
  std::string id = activate(orch, bp);
  std::uint64_t v0 = orch.vcontrollers().at("arm0").front().config_version;
  ReconfigureDelta delta;
  VFSpec extra;
  extra.name = "extra";
  extra.demand = rv(50);
  delta.add_vfs.push_back(extra);
  REQUIRE(orch.reconfigure(id, delta, "owner_a").ok);
  CHECK(orch.vcontrollers().at("arm0").front().config_version == v0 + 1);
}

TEST_CASE("terminate restores the initial snapshot exactly") {
  Orchestrator orch(demo_inventory());
  std::string initial = orch.snapshot_json();
  SliceBlueprint bp = simple_blueprint("bp", "owner_a", 3, 400);
  bp.vfs[0].equipment_binding = "arm0";
  bp.vfs[1].demand.radio_units[Rat::URLLC] = 1;
  bp.vlinks.push_back({"vf0", "vf1", 50, 200.0});
  std::string id = activate(orch, bp);
  CHECK(orch.snapshot_json() != initial);

  orch.terminate(id, "owner_a");
  CHECK(orch.slice(id).state == SliceState::TERMINATED);
  CHECK(orch.snapshot_json() == initial);
  CHECK(orch.check_invariants().empty());

  CHECK_THROWS_AS(orch.terminate(id, "owner_a"), NotFoundError);
  CHECK_THROWS_AS(orch.terminate("sl-999999", "owner_a"), NotFoundError);
}

TEST_CASE("terminate closes open federations first") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint exporter_bp = simple_blueprint("exp", "owner_a", 1, 100);
  exporter_bp.streams.push_back({"telemetry", "vf0", Sensitivity::PUBLIC});
  std::string exporter = activate(orch, exporter_bp);
  std::string importer =
      activate(orch, simple_blueprint("imp", "owner_b", 1, 100));

  SFIRule rule;
  rule.stream_id = "telemetry";
  FederationLink& link =
      orch.create_federation(exporter, importer, {rule}, "owner_a");
  orch.consent_federation(link.id, "owner_a");
  orch.consent_federation(link.id, "owner_b");
  REQUIRE(orch.federation().find_link(link.id)->state ==
          FederationState::ACTIVE);

  orch.terminate(exporter, "owner_a");
  CHECK(orch.federation().find_link(link.id)->state ==
        FederationState::CLOSED);
}

TEST_CASE("terminate is denied without MAINTAIN rights") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 1, 100));
  CHECK_THROWS_AS(orch.terminate(id, "operator"), UnauthorizedError);
  DelegationGrant grant;
  grant.grantor = "owner_a";
  grant.grantee = "operator";
  grant.scope = {id};
  grant.actions = {GrantAction::MAINTAIN};
  grant.expiry = 1000000;
  orch.delegate(grant);
  CHECK_NOTHROW(orch.terminate(id, "operator"));
}

TEST_CASE("bind_vcontroller: slots, exhaustion, one slice per controller") {
  Orchestrator orch(demo_inventory());
  std::string a = activate(orch, simple_blueprint("a", "owner_a", 1, 100));
  std::string b = activate(orch, simple_blueprint("b", "owner_b", 1, 100));

  VController va = orch.bind_vcontroller("arm0", a);
  VController vb = orch.bind_vcontroller("arm0", b);
  CHECK(va.id != vb.id);
  CHECK(va.slice_id == a);
  CHECK(vb.slice_id == b);
  CHECK(va.config_version == 1);
  CHECK_THROWS_AS(orch.bind_vcontroller("arm0", a), EquipmentExhaustedError);
  CHECK_THROWS_AS(orch.bind_vcontroller("ghost", a), NotFoundError);
}

TEST_CASE("delegate and authorize: ownership, action subset, expiry") {
  Orchestrator orch(demo_inventory());
  std::string id = activate(orch, simple_blueprint("bp", "owner_a", 1, 100));

  // Owner may do anything on own objects.
  CHECK(orch.authorize("owner_a", GrantAction::MONITOR, id));
  CHECK(orch.authorize("owner_a", GrantAction::RECONFIGURE, id));
  CHECK(orch.authorize("factory", GrantAction::MAINTAIN, "arm0"));
  CHECK_FALSE(orch.authorize("owner_b", GrantAction::MONITOR, id));

  // delegate() demands ownership of the scope.
  DelegationGrant bogus;
  bogus.grantor = "owner_b";
  bogus.grantee = "operator";
  bogus.scope = {id};
  bogus.actions = {GrantAction::MONITOR};
  bogus.expiry = 1000;
  CHECK_THROWS_AS(orch.delegate(bogus), OwnershipError);

  DelegationGrant grant;
  grant.grantor = "owner_a";
  grant.grantee = "operator";
  grant.scope = {id};
  grant.actions = {GrantAction::MONITOR};
  grant.expiry = orch.now() + 50;
  orch.delegate(grant);
  CHECK(orch.authorize("operator", GrantAction::MONITOR, id));
  // Action subset: MONITOR grant does not allow RECONFIGURE.
  CHECK_FALSE(orch.authorize("operator", GrantAction::RECONFIGURE, id));

  // Expired grant no longer authorizes.
  while (orch.now() < grant.expiry) orch.tick();
  CHECK_FALSE(orch.authorize("operator", GrantAction::MONITOR, id));
}

TEST_CASE("FSM: legal transition table") {
  CHECK(legal_transition(SliceState::REQUESTED, SliceState::ADMITTED));
  CHECK(legal_transition(SliceState::REQUESTED, SliceState::REJECTED));
  CHECK(legal_transition(SliceState::ADMITTED, SliceState::PLACING));
  CHECK(legal_transition(SliceState::PLACING, SliceState::INSTANTIATING));
  CHECK(legal_transition(SliceState::INSTANTIATING, SliceState::ACTIVE));
  CHECK(legal_transition(SliceState::INSTANTIATING, SliceState::REJECTED));
  CHECK(legal_transition(SliceState::ACTIVE, SliceState::RECONFIGURING));
  CHECK(legal_transition(SliceState::ACTIVE, SliceState::TERMINATING));
  CHECK(legal_transition(SliceState::RECONFIGURING, SliceState::ACTIVE));
  CHECK(legal_transition(SliceState::TERMINATING, SliceState::TERMINATED));

  CHECK_FALSE(legal_transition(SliceState::REQUESTED, SliceState::ACTIVE));
  CHECK_FALSE(legal_transition(SliceState::ACTIVE, SliceState::ADMITTED));
  CHECK_FALSE(legal_transition(SliceState::TERMINATED, SliceState::ACTIVE));
  CHECK_FALSE(legal_transition(SliceState::REJECTED, SliceState::ADMITTED));

  // Lifecycle preconditions surface as LifecycleError.
  Orchestrator orch(demo_inventory());
  std::string id = orch.submit(simple_blueprint("bp", "owner_a", 1, 100));
  orch.process_pending();
  CHECK_THROWS_AS(orch.terminate(id, "owner_a"), LifecycleError);
  orch.instantiate(id);
  CHECK_THROWS_AS(orch.instantiate(id), LifecycleError);
}

TEST_CASE("event log records only legal transitions") {
  Orchestrator orch(demo_inventory());
  std::string a = activate(orch, simple_blueprint("a", "owner_a", 2, 100));
  ReconfigureDelta delta;
  delta.remove_vfs = {"vf1"};
  orch.reconfigure(a, delta, "owner_a");
  orch.terminate(a, "owner_a");
  orch.submit(simple_blueprint("big", "owner_b", 1, 999999));
  orch.process_pending();

  for (const auto& line : orch.event_log()) {
    std::istringstream ls(line);
    std::string ts, slice, transition, reason;
    std::getline(ls, ts, '\t');
    std::getline(ls, slice, '\t');
    std::getline(ls, transition, '\t');
    std::getline(ls, reason, '\t');
    auto arrow = transition.find("->");
    REQUIRE(arrow != std::string::npos);
    std::string from = transition.substr(0, arrow);
    std::string to = transition.substr(arrow + 2);
    if (from == "-") continue;  // creation record
    CHECK(legal_transition(slice_state_from_name(from),
                           slice_state_from_name(to)));
  }
}

TEST_CASE("determinism: identical runs produce byte-identical event logs") {
  auto run = [] {
    Orchestrator orch(demo_inventory());
    std::string a = activate(orch, simple_blueprint("a", "owner_a", 2, 300));
    activate(orch, simple_blueprint("b", "owner_b", 1, 500));
    ReconfigureDelta delta;
    delta.remove_vfs = {"vf0"};
    orch.reconfigure(a, delta, "owner_a");
    orch.terminate(a, "owner_a");
    orch.submit(simple_blueprint("later", "owner_a", 1, 100));
    orch.process_pending();
    return orch.event_log_text();
  };
  CHECK(run() == run());
}

TEST_CASE("slice isolation: terminating A leaves B's plan untouched") {
  Orchestrator orch(demo_inventory());
  std::string a = activate(orch, simple_blueprint("a", "owner_a", 2, 300));
  std::string b = activate(orch, simple_blueprint("b", "owner_b", 2, 300));
  std::string plan_before = plan_to_json(*orch.slice(b).plan).dump();
  orch.terminate(a, "owner_a");
  CHECK(plan_to_json(*orch.slice(b).plan).dump() == plan_before);

  // And no two slices ever share a vController.
  SliceBlueprint with_eq = simple_blueprint("c", "owner_a", 1, 100);
  with_eq.vfs[0].equipment_binding = "arm0";
  std::string c = activate(orch, with_eq);
  SliceBlueprint with_eq2 = simple_blueprint("d", "owner_b", 1, 100);
  with_eq2.vfs[0].equipment_binding = "arm0";
  std::string d = activate(orch, with_eq2);
  const auto& vcs = orch.vcontrollers().at("arm0");
  REQUIRE(vcs.size() == 2);
  CHECK(vcs[0].slice_id != vcs[1].slice_id);
}

TEST_CASE("configured oversubscription admits beyond physical capacity") {
  OrchestratorConfig config;
  config.oversubscription = 1.5;
  Orchestrator orch(demo_inventory(), config);
  // 2500 > 2000 physical, but within the 1.5x admission envelope. The
  // spawn then fails against real capacity and rolls back.
  std::string id = orch.submit(simple_blueprint("over", "owner_a", 1, 2500));
  orch.process_pending();
  CHECK(orch.slice(id).state == SliceState::ADMITTED);
  orch.instantiate(id);
  CHECK(orch.slice(id).state == SliceState::REJECTED);

  // The default policy admits nothing beyond physical capacity.
  Orchestrator strict(demo_inventory());
  std::string denied =
      strict.submit(simple_blueprint("over", "owner_a", 1, 2500));
  strict.process_pending();
  CHECK(strict.slice(denied).state == SliceState::REJECTED);
}

TEST_CASE("realtime mode sleeps for the joined response time") {
  OrchestratorConfig config;
  config.realtime = true;
  config.orchestration_overhead_s = 0.03;
  config.params.with_vf.alpha_s = 0.02;
  config.params.with_vf.beta_s_per_instance = 0.001;
  Orchestrator orch(demo_inventory(), config);
  std::string id = orch.submit(simple_blueprint("rt", "owner_a", 1, 100));
  orch.process_pending();
  auto started = std::chrono::steady_clock::now();
  orch.instantiate(id);
  double wall = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - started)
                    .count();
  CHECK(wall >= 0.04);  // at least overhead + alpha
  CHECK(orch.slice(id).state == SliceState::ACTIVE);
}

TEST_CASE("blueprint federation proposals are created at activation") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint exp_bp = simple_blueprint("exp", "owner_a", 1, 100);
  exp_bp.streams.push_back({"telemetry", "vf0", Sensitivity::PUBLIC});
  std::string exporter = activate(orch, exp_bp);

  SliceBlueprint imp_bp = simple_blueprint("imp", "owner_b", 1, 100);
  FederationProposal proposal;
  proposal.exporter_slice_id = exporter;
  SFIRule rule;
  rule.stream_id = "telemetry";
  proposal.rules.push_back(rule);
  imp_bp.federations.push_back(proposal);
  std::string importer = activate(orch, imp_bp);

  REQUIRE(orch.slice(importer).federations.size() == 1);
  const std::string link_id = orch.slice(importer).federations[0];
  const FederationLink* link = orch.federation().find_link(link_id);
  REQUIRE(link != nullptr);
  CHECK(link->state == FederationState::PROPOSED);
  CHECK(link->exporter_slice_id == exporter);
  CHECK(orch.slice(exporter).federations ==
        std::vector<std::string>{link_id});

  // A proposal naming a missing exporter is skipped with an audit note.
  SliceBlueprint orphan_bp = simple_blueprint("orphan", "owner_b", 1, 100);
  FederationProposal ghost;
  ghost.exporter_slice_id = "sl-999999";
  orphan_bp.federations.push_back(ghost);
  std::string orphan = activate(orch, orphan_bp);
  CHECK(orch.slice(orphan).federations.empty());
  CHECK(orch.federation().audit_log_text().find("skipped") !=
        std::string::npos);
}

TEST_CASE("snapshot export/import round trip") {
  Orchestrator orch(demo_inventory());
  SliceBlueprint bp = simple_blueprint("a", "owner_a", 2, 300);
  bp.vfs[0].equipment_binding = "arm0";
  bp.streams.push_back({"telemetry", "vf0", Sensitivity::CONFIDENTIAL});
  std::string a = activate(orch, bp);
  std::string b = activate(orch, simple_blueprint("b", "owner_b", 1, 100));
  SFIRule rule;
  rule.stream_id = "telemetry";
  FederationLink& link = orch.create_federation(a, b, {rule}, "owner_a");
  orch.consent_federation(link.id, "owner_a");
  DelegationGrant grant;
  grant.grantor = "owner_a";
  grant.grantee = "operator";
  grant.scope = {a};
  grant.actions = {GrantAction::MONITOR, GrantAction::MAINTAIN};
  grant.expiry = 10000;
  orch.delegate(grant);

  std::string exported = orch.snapshot_json();
  Orchestrator restored = Orchestrator::from_snapshot(exported);
  CHECK(restored.snapshot_json() == exported);
  CHECK(restored.check_invariants().empty());

  // The restored system keeps working: terminate the imported slice and
  // the books still balance.
  restored.terminate(a, "owner_a");
  CHECK(restored.check_invariants().empty());
}
