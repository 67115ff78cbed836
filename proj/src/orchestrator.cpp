#include "slicenet/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slicenet/errors.hpp"
#include "slicenet/json_io.hpp"

namespace slicenet {

using nlohmann::json;

namespace {

std::pair<std::string, std::string> canonical(const std::string& a,
                                              const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string format_id(const char* prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06llu", prefix,
                static_cast<unsigned long long>(n));
  return buf;
}

std::int64_t scaled(std::int64_t value, double factor) {
  if (factor == 1.0) return value;
  return static_cast<std::int64_t>(std::llround(value * factor));
}

}  // namespace

const char* slice_state_name(SliceState s) {
  switch (s) {
    case SliceState::REQUESTED: return "REQUESTED";
    case SliceState::ADMITTED: return "ADMITTED";
    case SliceState::PLACING: return "PLACING";
    case SliceState::INSTANTIATING: return "INSTANTIATING";
    case SliceState::ACTIVE: return "ACTIVE";
    case SliceState::RECONFIGURING: return "RECONFIGURING";
    case SliceState::TERMINATING: return "TERMINATING";
    case SliceState::TERMINATED: return "TERMINATED";
    case SliceState::REJECTED: return "REJECTED";
  }
  return "?";
}

SliceState slice_state_from_name(const std::string& name) {
  for (SliceState s :
       {SliceState::REQUESTED, SliceState::ADMITTED, SliceState::PLACING,
        SliceState::INSTANTIATING, SliceState::ACTIVE,
        SliceState::RECONFIGURING, SliceState::TERMINATING,
        SliceState::TERMINATED, SliceState::REJECTED}) {
    if (name == slice_state_name(s)) return s;
  }
  throw ValidationError(name, "unknown slice state");
}

bool legal_transition(SliceState from, SliceState to) {
  switch (from) {
    case SliceState::REQUESTED:
      return to == SliceState::ADMITTED || to == SliceState::REJECTED;
    case SliceState::ADMITTED:
      return to == SliceState::PLACING;
    case SliceState::PLACING:
      return to == SliceState::INSTANTIATING;
    case SliceState::INSTANTIATING:
      // REJECTED covers the spawn-failure rollback.
      return to == SliceState::ACTIVE || to == SliceState::REJECTED;
    case SliceState::ACTIVE:
      return to == SliceState::RECONFIGURING || to == SliceState::TERMINATING;
    case SliceState::RECONFIGURING:
      return to == SliceState::ACTIVE;
    case SliceState::TERMINATING:
      return to == SliceState::TERMINATED;
    case SliceState::TERMINATED:
    case SliceState::REJECTED:
      return false;
  }
  return false;
}

const char* grant_action_name(GrantAction a) {
  switch (a) {
    case GrantAction::MONITOR: return "MONITOR";
    case GrantAction::RECONFIGURE: return "RECONFIGURE";
    case GrantAction::MAINTAIN: return "MAINTAIN";
  }
  return "?";
}

GrantAction grant_action_from_name(const std::string& name) {
  if (name == "MONITOR") return GrantAction::MONITOR;
  if (name == "RECONFIGURE") return GrantAction::RECONFIGURE;
  if (name == "MAINTAIN") return GrantAction::MAINTAIN;
  throw ValidationError(name, "unknown grant action");
}

Orchestrator::Orchestrator(Inventory inventory, OrchestratorConfig config)
    : inventory_(std::move(inventory)), config_(config) {
  // Derive per-site node lists when the input omitted them.
  for (auto& site : inventory_.sites) {
    if (!site.nodes.empty()) continue;
    for (const auto& n : inventory_.nodes) {
      if (n.site_id == site.id) site.nodes.push_back(n.id);
    }
  }
  auto violations = validate_inventory(inventory_);
  if (!violations.empty()) {
    throw ValidationError("inventory", violations.front());
  }
  emu_ = Emulator(inventory_.nodes, config_.params, config_.realtime);
  for (const auto& n : inventory_.nodes) node_book_[n.id];
  for (const auto& s : inventory_.sites) site_radio_reserved_[s.id];
}

void Orchestrator::append_event(std::string line) {
  if (!config_.event_log_path.empty()) {
    std::ofstream out(config_.event_log_path, std::ios::app);
    out << line << '\n';
  }
  events_.push_back(std::move(line));
}

void Orchestrator::transition(Slice& slice, SliceState to,
                              const std::string& reason) {
  if (!legal_transition(slice.state, to)) {
    throw LifecycleError("illegal transition " +
                         std::string(slice_state_name(slice.state)) + "->" +
                         slice_state_name(to) + " for " + slice.id);
  }
  std::string line = std::to_string(clock_) + "\t" + slice.id + "\t" +
                     slice_state_name(slice.state) + "->" +
                     slice_state_name(to) + "\t" + reason;
  slice.state = to;
  append_event(std::move(line));
}

std::string Orchestrator::submit(const SliceBlueprint& blueprint,
                                 std::optional<LogicalTime> arrival) {
  tick();
  validate_blueprint(blueprint, inventory_);
  Slice slice;
  slice.id = format_id("sl", next_slice_++);
  slice.blueprint = blueprint;
  slice.state = SliceState::REQUESTED;
  slice.arrival = arrival.value_or(clock_);
  append_event(std::to_string(clock_) + "\t" + slice.id +
               "\t-->REQUESTED\tsubmitted");
  std::string id = slice.id;
  pending_.push_back(id);
  slices_[id] = std::move(slice);
  return id;
}

std::vector<std::string> Orchestrator::order_requests(
    const std::vector<std::pair<LogicalTime, std::string>>& pending) {
  std::vector<std::pair<LogicalTime, std::string>> sorted = pending;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second < b.second;
            });
  std::vector<std::string> out;
  out.reserve(sorted.size());
  for (auto& [arrival, id] : sorted) out.push_back(std::move(id));
  return out;
}

std::vector<std::pair<LogicalTime, std::string>> Orchestrator::pending()
    const {
  std::vector<std::pair<LogicalTime, std::string>> out;
  for (const auto& id : pending_) {
    out.emplace_back(slices_.at(id).arrival, id);
  }
  return out;
}

std::vector<std::string> Orchestrator::process_pending() {
  std::vector<std::string> order = order_requests(pending());
  pending_.clear();
  for (const auto& id : order) admit_one(id);
  return order;
}

InventorySnapshot Orchestrator::build_snapshot() const {
  InventorySnapshot snap;
  for (const auto& n : inventory_.nodes) {
    const NodeBook& book = node_book_.at(n.id);
    ResourceVector admission_capacity = n.capacity;
    admission_capacity.cpu_millicores =
        scaled(n.capacity.cpu_millicores, config_.oversubscription);
    admission_capacity.memory_mb =
        scaled(n.capacity.memory_mb, config_.oversubscription);
    admission_capacity.storage_mb =
        scaled(n.capacity.storage_mb, config_.oversubscription);
    admission_capacity.bandwidth_mbps =
        scaled(n.capacity.bandwidth_mbps, config_.oversubscription);
    snap.nodes[n.id] = SnapshotNode{
        n.id, n.site_id, rv_sub(admission_capacity, book.reserved),
        n.max_instances - book.reserved_count};
  }
  for (const auto& s : inventory_.sites) {
    SnapshotSite site{s.id, s.intra_site_latency_ms, s.radio_capacity,
                      s.local_core};
    auto it = site_radio_reserved_.find(s.id);
    if (it != site_radio_reserved_.end()) {
      for (const auto& [rat, units] : it->second) {
        site.radio_residual[rat] -= units;
      }
    }
    snap.sites[s.id] = std::move(site);
    for (const auto& wl : s.wan_links) {
      auto key = canonical(s.id, wl.peer_site);
      if (snap.wan.count(key)) continue;
      std::int64_t reserved = 0;
      auto rit = wan_reserved_.find(key);
      if (rit != wan_reserved_.end()) reserved = rit->second;
      snap.wan[key] = SnapshotWanEdge{key.first, key.second, wl.latency_ms,
                                      wl.bandwidth_mbps - reserved};
    }
  }
  for (const auto& e : inventory_.equipment) {
    int used = 0;
    auto it = vcontrollers_.find(e.id);
    if (it != vcontrollers_.end()) used = static_cast<int>(it->second.size());
    snap.equipment[e.id] =
        SnapshotEquipment{e.id, e.site_id, e.max_vcontrollers - used};
  }
  return snap;
}

std::string Orchestrator::site_of_node(const std::string& node_id) const {
  const EdgeNode* n = inventory_.find_node(node_id);
  if (!n) throw NotFoundError("unknown node " + node_id);
  return n->site_id;
}

// direction +1 reserves, -1 releases. Reservation amounts derive only from
// the blueprint and plan, so a reserve/release pair cancels exactly.
void Orchestrator::commit_reservations(const Slice& slice, int direction) {
  const PlacementPlan& plan = *slice.plan;
  for (const auto& [vf_name, node_id] : plan.assignments) {
    const VFSpec* vf = slice.blueprint.find_vf(vf_name);
    if (!vf) continue;
    NodeBook& book = node_book_.at(node_id);
    if (direction > 0) {
      book.reserved = rv_add(book.reserved, vf->demand.compute_only());
      book.reserved_count += 1;
    } else {
      book.reserved = rv_sub(book.reserved, vf->demand.compute_only());
      book.reserved_count -= 1;
    }
    auto& radio = site_radio_reserved_[site_of_node(node_id)];
    for (const auto& [rat, units] : vf->demand.radio_units) {
      radio[rat] += direction * units;
    }
  }
  for (const auto& [index, route] : plan.link_routes) {
    if (route.bandwidth_mbps == 0) continue;
    for (const auto& hop : route.wan_hops) {
      wan_reserved_[canonical(hop.site_a, hop.site_b)] +=
          direction * route.bandwidth_mbps;
    }
  }
}

void Orchestrator::admit_one(const std::string& request_id) {
  tick();
  Slice& slice = slices_.at(request_id);
  if (slice.state != SliceState::REQUESTED) {
    throw LifecycleError("request " + request_id + " already processed");
  }
  PlaceResult result = place(slice.blueprint, build_snapshot());
  if (!placed(result)) {
    const PlacementFailure& failure = std::get<PlacementFailure>(result);
    slice.reject_reason = failure.reason;
    transition(slice, SliceState::REJECTED,
               std::string(reject_reason_name(failure.reason)) + ": " +
                   failure.detail);
    return;
  }
  PlacementPlan plan = std::get<PlacementPlan>(std::move(result));
  // Every touched equipment needs a free vController slot.
  for (const auto& [eq_id, vc_id] : plan.vcontroller_allocs) {
    const Equipment* eq = inventory_.find_equipment(eq_id);
    auto it = vcontrollers_.find(eq_id);
    int used = it == vcontrollers_.end() ? 0
                                         : static_cast<int>(it->second.size());
    if (!eq || used >= eq->max_vcontrollers) {
      slice.reject_reason = RejectReason::EQUIPMENT_EXHAUSTED;
      transition(slice, SliceState::REJECTED,
                 "EQUIPMENT_EXHAUSTED: no vController slot on " + eq_id);
      return;
    }
  }
  for (auto& [eq_id, vc_id] : plan.vcontroller_allocs) {
    vc_id = bind_vcontroller_internal(eq_id, slice.id, slice.blueprint.tenant_id)
                .id;
  }
  slice.plan = std::move(plan);
  commit_reservations(slice, +1);
  transition(slice, SliceState::ADMITTED, "");
}

const Slice& Orchestrator::instantiate(const std::string& slice_id,
                                       SpawnMode mode) {
  tick();
  auto it = slices_.find(slice_id);
  if (it == slices_.end()) throw NotFoundError("unknown slice " + slice_id);
  Slice& slice = it->second;
  if (slice.state != SliceState::ADMITTED || !slice.plan) {
    throw LifecycleError("slice " + slice_id + " is not ADMITTED");
  }
  transition(slice, SliceState::PLACING, "");
  transition(slice, SliceState::INSTANTIATING, "");

  std::map<std::string, std::vector<SpawnSpec>> per_node;
  for (const auto& [vf_name, node_id] : slice.plan->assignments) {
    const VFSpec* vf = slice.blueprint.find_vf(vf_name);
    per_node[node_id].push_back({slice.id, vf_name, vf->demand});
  }

  double max_elapsed = 0;
  std::vector<std::pair<std::string, std::vector<std::string>>> created;
  bool failed = false;
  std::string failure_detail;
  for (const auto& [node_id, specs] : per_node) {
    try {
      SpawnResult result = emu_.spawn_batch(node_id, specs, mode);
      max_elapsed = std::max(max_elapsed, result.elapsed_s);
      created.emplace_back(node_id, result.instance_ids);
    } catch (const CapacityError& e) {
      failed = true;
      failure_detail = e.what();
      break;
    }
  }
  if (failed) {
    for (const auto& [node_id, ids] : created) emu_.teardown(node_id, ids);
    commit_reservations(slice, -1);
    release_vcontrollers(slice.id);
    slice.plan.reset();
    slice.instances.clear();
    slice.reject_reason = RejectReason::INSUFFICIENT_CAPACITY;
    transition(slice, SliceState::REJECTED, "SPAWN_FAILED: " + failure_detail);
    return slice;
  }
  for (const auto& [node_id, ids] : created) {
    slice.instances.insert(slice.instances.end(), ids.begin(), ids.end());
  }
  double response = config_.orchestration_overhead_s + max_elapsed;
  emu_.advance_clock(response);
  // Node agents spawn in parallel; the join waits for the slowest one, so
  // realtime mode sleeps once for the joined duration.
  if (config_.realtime) emu_.sleep_for(response);
  slice.response_time_s = response;
  transition(slice, SliceState::ACTIVE,
             "response_time_s=" + std::to_string(response));
  create_blueprint_federations(slice);
  return slice;
}

void Orchestrator::create_blueprint_federations(Slice& slice) {
  for (const auto& proposal : slice.blueprint.federations) {
    const Slice* exporter = find_slice(proposal.exporter_slice_id);
    if (!exporter || exporter->state != SliceState::ACTIVE) {
      federation_.audit_note(clock_, "proposal from blueprint " +
                                         slice.blueprint.id + " skipped: " +
                                         proposal.exporter_slice_id +
                                         " not ACTIVE");
      continue;
    }
    try {
      FederationLink& link = federation_.create_link(
          exporter->id, slice.id, exporter->blueprint.tenant_id,
          slice.blueprint.tenant_id, proposal.rules, exporter->blueprint,
          clock_);
      slice.federations.push_back(link.id);
      slices_.at(exporter->id).federations.push_back(link.id);
    } catch (const Error& e) {
      federation_.audit_note(clock_, "proposal from blueprint " +
                                         slice.blueprint.id +
                                         " rejected: " + e.what());
    }
  }
}

ReconfigureOutcome Orchestrator::reconfigure(const std::string& slice_id,
                                             const ReconfigureDelta& delta,
                                             const std::string& caller) {
  tick();
  auto it = slices_.find(slice_id);
  if (it == slices_.end() || it->second.state == SliceState::TERMINATED) {
    throw NotFoundError("unknown slice " + slice_id);
  }
  Slice& slice = it->second;
  if (!authorize(caller, GrantAction::RECONFIGURE, slice_id)) {
    throw UnauthorizedError("tenant " + caller + " may not reconfigure " +
                            slice_id);
  }
  if (slice.state != SliceState::ACTIVE) {
    throw LifecycleError("slice " + slice_id + " is not ACTIVE");
  }

  // --- validate the delta ----------------------------------------------
  std::set<std::string> removed(delta.remove_vfs.begin(),
                                delta.remove_vfs.end());
  for (std::size_t i = 0; i < delta.remove_vfs.size(); ++i) {
    if (!slice.blueprint.find_vf(delta.remove_vfs[i])) {
      throw ValidationError("remove_vfs[" + std::to_string(i) + "]",
                            "unknown VF " + delta.remove_vfs[i]);
    }
  }
  std::set<std::string> surviving;
  for (const auto& vf : slice.blueprint.vfs) {
    if (!removed.count(vf.name)) surviving.insert(vf.name);
  }
  for (std::size_t i = 0; i < delta.add_vfs.size(); ++i) {
    const VFSpec& vf = delta.add_vfs[i];
    std::string path = "add_vfs[" + std::to_string(i) + "]";
    if (vf.name.empty() || surviving.count(vf.name)) {
      throw ValidationError(path + ".name", "duplicate or empty VF name");
    }
    if (!vf.demand.well_formed()) {
      throw ValidationError(path + ".demand", "negative demand component");
    }
    if (vf.site_affinity && !inventory_.find_site(*vf.site_affinity)) {
      throw ValidationError(path + ".site_affinity", "unknown site");
    }
    if (vf.equipment_binding &&
        !inventory_.find_equipment(*vf.equipment_binding)) {
      throw ValidationError(path + ".equipment_binding", "unknown equipment");
    }
    surviving.insert(vf.name);
  }
  for (std::size_t i = 0; i < delta.updated_vlinks.size(); ++i) {
    const VLinkSpec& vl = delta.updated_vlinks[i];
    std::string path = "updated_vlinks[" + std::to_string(i) + "]";
    for (const auto& [ep, field] :
         {std::pair{&vl.endpoint_a, ".endpoint_a"},
          std::pair{&vl.endpoint_b, ".endpoint_b"}}) {
      bool ok = surviving.count(*ep) || inventory_.find_equipment(*ep);
      if (!ok) {
        throw ValidationError(path + field,
                              "endpoint " + *ep + " not in slice after delta");
      }
    }
    if (vl.max_latency_ms <= 0) {
      throw ValidationError(path + ".max_latency_ms", "must be > 0");
    }
  }

  // --- feasibility against current residuals ----------------------------
  InventorySnapshot snap = build_snapshot();
  PlaceResult result = place_additions(delta.add_vfs, delta.updated_vlinks,
                                       slice.plan->assignments, snap);
  if (!placed(result)) {
    const PlacementFailure& failure = std::get<PlacementFailure>(result);
    return {false, std::string(reject_reason_name(failure.reason)) + ": " +
                       failure.detail};
  }
  PlacementPlan add_plan = std::get<PlacementPlan>(std::move(result));

  // New equipment references need free vController slots.
  std::vector<std::string> new_equipment;
  for (const auto& [eq_id, unused] : add_plan.vcontroller_allocs) {
    if (slice.plan->vcontroller_allocs.count(eq_id)) continue;
    const Equipment* eq = inventory_.find_equipment(eq_id);
    auto vit = vcontrollers_.find(eq_id);
    int used =
        vit == vcontrollers_.end() ? 0 : static_cast<int>(vit->second.size());
    if (!eq || used >= eq->max_vcontrollers) {
      return {false, "EQUIPMENT_EXHAUSTED: no vController slot on " + eq_id};
    }
    new_equipment.push_back(eq_id);
  }

  // Emulator-level precheck so the commit below cannot fail halfway.
  {
    std::map<std::string, std::vector<SpawnSpec>> staged;
    for (const auto& [vf_name, node_id] : add_plan.assignments) {
      for (const auto& vf : delta.add_vfs) {
        if (vf.name == vf_name) {
          staged[node_id].push_back({slice.id, vf_name, vf.demand});
        }
      }
    }
    for (const auto& [node_id, specs] : staged) {
      const NodeRuntime& rt = emu_.node(node_id);
      if (rt.count() + static_cast<int>(specs.size()) > rt.node.max_instances) {
        return {false, "INSUFFICIENT_CAPACITY: instance cap on " + node_id};
      }
      ResourceVector after = rt.used().compute_only();
      for (const auto& s : specs) {
        after = rv_add(after, s.demand.compute_only());
      }
      if (!rv_fits(after, rt.node.capacity)) {
        return {false, "INSUFFICIENT_CAPACITY: node capacity on " + node_id};
      }
    }
  }

  // --- commit ------------------------------------------------------------
  transition(slice, SliceState::RECONFIGURING, "");

  // 1. Reserve and spawn the additions (checked above, cannot fail).
  double max_elapsed = 0;
  {
    std::map<std::string, std::vector<SpawnSpec>> staged;
    for (const auto& [vf_name, node_id] : add_plan.assignments) {
      for (const auto& vf : delta.add_vfs) {
        if (vf.name == vf_name) {
          staged[node_id].push_back({slice.id, vf_name, vf.demand});
        }
      }
    }
    for (const auto& [node_id, specs] : staged) {
      SpawnResult spawned = emu_.spawn_batch(node_id, specs, SpawnMode::WITH_VF);
      max_elapsed = std::max(max_elapsed, spawned.elapsed_s);
      slice.instances.insert(slice.instances.end(),
                             spawned.instance_ids.begin(),
                             spawned.instance_ids.end());
    }
    for (const auto& vf : delta.add_vfs) {
      auto ait = add_plan.assignments.find(vf.name);
      if (ait == add_plan.assignments.end()) continue;
      NodeBook& book = node_book_.at(ait->second);
      book.reserved = rv_add(book.reserved, vf.demand.compute_only());
      book.reserved_count += 1;
      auto& radio = site_radio_reserved_[site_of_node(ait->second)];
      for (const auto& [rat, units] : vf.demand.radio_units) {
        radio[rat] += units;
      }
    }
  }
  for (const auto& eq_id : new_equipment) {
    add_plan.vcontroller_allocs[eq_id] =
        bind_vcontroller_internal(eq_id, slice.id, slice.blueprint.tenant_id)
            .id;
  }

  // 2. Rebuild the blueprint link list: drop links touching removed VFs,
  //    replace specs matched by endpoint pair, append new links.
  auto touches_removed = [&](const VLinkSpec& vl) {
    return removed.count(vl.endpoint_a) || removed.count(vl.endpoint_b);
  };
  auto same_pair = [](const VLinkSpec& a, const VLinkSpec& b) {
    return (a.endpoint_a == b.endpoint_a && a.endpoint_b == b.endpoint_b) ||
           (a.endpoint_a == b.endpoint_b && a.endpoint_b == b.endpoint_a);
  };
  std::vector<VLinkSpec> new_links;
  std::vector<LinkRoute> new_routes;
  std::vector<bool> delta_link_used(delta.updated_vlinks.size(), false);
  for (std::size_t i = 0; i < slice.blueprint.vlinks.size(); ++i) {
    const VLinkSpec& old_link = slice.blueprint.vlinks[i];
    LinkRoute old_route = slice.plan->link_routes.at(static_cast<int>(i));
    if (touches_removed(old_link)) {
      for (const auto& hop : old_route.wan_hops) {
        wan_reserved_[canonical(hop.site_a, hop.site_b)] -=
            old_route.bandwidth_mbps;
      }
      continue;
    }
    bool replaced = false;
    for (std::size_t d = 0; d < delta.updated_vlinks.size(); ++d) {
      if (delta_link_used[d] || !same_pair(old_link, delta.updated_vlinks[d])) {
        continue;
      }
      delta_link_used[d] = true;
      for (const auto& hop : old_route.wan_hops) {
        wan_reserved_[canonical(hop.site_a, hop.site_b)] -=
            old_route.bandwidth_mbps;
      }
      LinkRoute route = add_plan.link_routes.at(static_cast<int>(d));
      new_links.push_back(delta.updated_vlinks[d]);
      new_routes.push_back(route);
      replaced = true;
      break;
    }
    if (!replaced) {
      new_links.push_back(old_link);
      new_routes.push_back(old_route);
    }
  }
  for (std::size_t d = 0; d < delta.updated_vlinks.size(); ++d) {
    if (delta_link_used[d]) continue;
    new_links.push_back(delta.updated_vlinks[d]);
    new_routes.push_back(add_plan.link_routes.at(static_cast<int>(d)));
  }
  // Bandwidth for updated/new routes was already debited inside
  // place_additions' working state; re-apply it to the books.
  for (std::size_t d = 0; d < delta.updated_vlinks.size(); ++d) {
    const LinkRoute& route = add_plan.link_routes.at(static_cast<int>(d));
    for (const auto& hop : route.wan_hops) {
      wan_reserved_[canonical(hop.site_a, hop.site_b)] += route.bandwidth_mbps;
    }
  }

  // 3. Removals always release resources.
  std::map<std::string, std::vector<std::string>> to_teardown;
  for (const auto& vf_name : delta.remove_vfs) {
    const VFSpec* vf = slice.blueprint.find_vf(vf_name);
    const std::string node_id = slice.plan->assignments.at(vf_name);
    for (const auto& inst : emu_.node(node_id).instances) {
      if (inst.slice_id == slice.id && inst.vf_name == vf_name) {
        to_teardown[node_id].push_back(inst.id);
      }
    }
    NodeBook& book = node_book_.at(node_id);
    book.reserved = rv_sub(book.reserved, vf->demand.compute_only());
    book.reserved_count -= 1;
    auto& radio = site_radio_reserved_[site_of_node(node_id)];
    for (const auto& [rat, units] : vf->demand.radio_units) {
      radio[rat] -= units;
    }
  }
  for (const auto& [node_id, ids] : to_teardown) {
    emu_.teardown(node_id, ids);
    for (const auto& id : ids) {
      slice.instances.erase(
          std::remove(slice.instances.begin(), slice.instances.end(), id),
          slice.instances.end());
    }
  }

  // 4. Fold everything into the slice.
  std::vector<VFSpec> vfs;
  for (const auto& vf : slice.blueprint.vfs) {
    if (!removed.count(vf.name)) vfs.push_back(vf);
  }
  vfs.insert(vfs.end(), delta.add_vfs.begin(), delta.add_vfs.end());
  slice.blueprint.vfs = std::move(vfs);
  slice.blueprint.vlinks = new_links;
  for (const auto& vf_name : delta.remove_vfs) {
    slice.plan->assignments.erase(vf_name);
  }
  for (const auto& [vf_name, node_id] : add_plan.assignments) {
    slice.plan->assignments[vf_name] = node_id;
  }
  slice.plan->link_routes.clear();
  for (std::size_t i = 0; i < new_routes.size(); ++i) {
    slice.plan->link_routes[static_cast<int>(i)] = new_routes[i];
  }
  for (const auto& [eq_id, vc_id] : add_plan.vcontroller_allocs) {
    slice.plan->vcontroller_allocs[eq_id] = vc_id;
  }
  // Drop vControllers for equipment the slice no longer references.
  {
    std::set<std::string> still_referenced;
    for (const auto& vf : slice.blueprint.vfs) {
      if (vf.equipment_binding) still_referenced.insert(*vf.equipment_binding);
    }
    for (const auto& vl : slice.blueprint.vlinks) {
      for (const std::string* ep : {&vl.endpoint_a, &vl.endpoint_b}) {
        if (inventory_.find_equipment(*ep)) still_referenced.insert(*ep);
      }
    }
    for (const auto& st : slice.blueprint.streams) {
      if (inventory_.find_equipment(st.producer)) {
        still_referenced.insert(st.producer);
      }
    }
    std::vector<std::string> dropped;
    for (const auto& [eq_id, vc_id] : slice.plan->vcontroller_allocs) {
      if (!still_referenced.count(eq_id)) dropped.push_back(eq_id);
    }
    for (const auto& eq_id : dropped) {
      auto& vcs = vcontrollers_[eq_id];
      vcs.erase(std::remove_if(vcs.begin(), vcs.end(),
                               [&](const VController& vc) {
                                 return vc.slice_id == slice.id;
                               }),
                vcs.end());
      slice.plan->vcontroller_allocs.erase(eq_id);
    }
  }
  // Runtime controller update: bump config versions for the slice.
  for (auto& [eq_id, vcs] : vcontrollers_) {
    for (auto& vc : vcs) {
      if (vc.slice_id == slice.id) vc.config_version += 1;
    }
  }

  emu_.advance_clock(max_elapsed);
  transition(slice, SliceState::ACTIVE, "reconfigured");
  return {true, ""};
}

const Slice& Orchestrator::terminate(const std::string& slice_id,
                                     const std::string& caller) {
  tick();
  auto it = slices_.find(slice_id);
  if (it == slices_.end() || it->second.state == SliceState::TERMINATED) {
    throw NotFoundError("unknown slice " + slice_id);
  }
  Slice& slice = it->second;
  if (!authorize(caller, GrantAction::MAINTAIN, slice_id)) {
    throw UnauthorizedError("tenant " + caller + " may not terminate " +
                            slice_id);
  }
  if (slice.state != SliceState::ACTIVE &&
      slice.state != SliceState::RECONFIGURING) {
    throw LifecycleError("slice " + slice_id + " is not ACTIVE");
  }
  transition(slice, SliceState::TERMINATING, "");
  // Open federations close before any resource is touched.
  federation_.close_links_for_slice(slice_id, clock_);

  std::map<std::string, std::vector<std::string>> to_teardown;
  for (const auto& node_id : emu_.node_ids()) {
    for (const auto& inst : emu_.node(node_id).instances) {
      if (inst.slice_id == slice_id) to_teardown[node_id].push_back(inst.id);
    }
  }
  for (const auto& [node_id, ids] : to_teardown) emu_.teardown(node_id, ids);
  slice.instances.clear();
  commit_reservations(slice, -1);
  release_vcontrollers(slice_id);
  transition(slice, SliceState::TERMINATED, "");
  return slice;
}

VController& Orchestrator::bind_vcontroller_internal(
    const std::string& equipment_id, const std::string& slice_id,
    const std::string& owner) {
  VController vc;
  vc.id = format_id("vc", next_vcontroller_++);
  vc.equipment_id = equipment_id;
  vc.slice_id = slice_id;
  vc.owner = owner;
  vc.config_version = 1;
  auto& vcs = vcontrollers_[equipment_id];
  vcs.push_back(std::move(vc));
  return vcs.back();
}

VController Orchestrator::bind_vcontroller(const std::string& equipment_id,
                                           const std::string& slice_id) {
  tick();
  const Equipment* eq = inventory_.find_equipment(equipment_id);
  if (!eq) throw NotFoundError("unknown equipment " + equipment_id);
  const Slice* slice = find_slice(slice_id);
  if (!slice) throw NotFoundError("unknown slice " + slice_id);
  auto it = vcontrollers_.find(equipment_id);
  int used = it == vcontrollers_.end() ? 0
                                       : static_cast<int>(it->second.size());
  if (used >= eq->max_vcontrollers) {
    throw EquipmentExhaustedError("equipment " + equipment_id +
                                  " has no free vController slot");
  }
  return bind_vcontroller_internal(equipment_id, slice_id,
                                   slice->blueprint.tenant_id);
}

void Orchestrator::release_vcontrollers(const std::string& slice_id) {
  for (auto& [eq_id, vcs] : vcontrollers_) {
    vcs.erase(std::remove_if(vcs.begin(), vcs.end(),
                             [&](const VController& vc) {
                               return vc.slice_id == slice_id;
                             }),
              vcs.end());
  }
}

bool Orchestrator::owns(const std::string& tenant,
                        const std::string& target) const {
  if (const Slice* slice = find_slice(target)) {
    return slice->blueprint.tenant_id == tenant;
  }
  if (const Equipment* eq = inventory_.find_equipment(target)) {
    const Site* site = inventory_.find_site(eq->site_id);
    return site && site->owner == tenant;
  }
  if (const Site* site = inventory_.find_site(target)) {
    return site->owner == tenant;
  }
  return false;
}

std::string Orchestrator::delegate(const DelegationGrant& grant) {
  tick();
  if (!inventory_.find_tenant(grant.grantor)) {
    throw ValidationError("grantor", "unknown tenant " + grant.grantor);
  }
  if (!inventory_.find_tenant(grant.grantee)) {
    throw ValidationError("grantee", "unknown tenant " + grant.grantee);
  }
  for (const auto& target : grant.scope) {
    if (!owns(grant.grantor, target)) {
      throw OwnershipError("grantor " + grant.grantor + " does not own " +
                           target);
    }
  }
  DelegationGrant stored = grant;
  stored.id = format_id("gr", next_grant_++);
  std::string id = stored.id;
  grants_[id] = std::move(stored);
  return id;
}

bool Orchestrator::authorize(const std::string& tenant, GrantAction action,
                             const std::string& target) const {
  if (owns(tenant, target)) return true;
  for (const auto& [id, grant] : grants_) {
    if (grant.grantee != tenant) continue;
    if (grant.expiry <= clock_) continue;
    if (!grant.actions.count(action)) continue;
    if (!grant.scope.count(target)) continue;
    return true;
  }
  return false;
}

FederationLink& Orchestrator::create_federation(
    const std::string& exporter_slice, const std::string& importer_slice,
    const std::vector<SFIRule>& rules, const std::string& caller) {
  tick();
  const Slice* exporter = find_slice(exporter_slice);
  const Slice* importer = find_slice(importer_slice);
  if (!exporter) throw NotFoundError("unknown slice " + exporter_slice);
  if (!importer) throw NotFoundError("unknown slice " + importer_slice);
  if (exporter->state != SliceState::ACTIVE ||
      importer->state != SliceState::ACTIVE) {
    throw LifecycleError("both slices must be ACTIVE to federate");
  }
  if (caller != exporter->blueprint.tenant_id &&
      caller != importer->blueprint.tenant_id) {
    throw UnauthorizedError("tenant " + caller +
                            " is not a party of the federation");
  }
  FederationLink& link = federation_.create_link(
      exporter_slice, importer_slice, exporter->blueprint.tenant_id,
      importer->blueprint.tenant_id, rules, exporter->blueprint, clock_);
  slices_.at(exporter_slice).federations.push_back(link.id);
  slices_.at(importer_slice).federations.push_back(link.id);
  return link;
}

FederationLink& Orchestrator::consent_federation(const std::string& link_id,
                                                 const std::string& tenant) {
  tick();
  return federation_.consent(link_id, tenant, clock_);
}

const Slice* Orchestrator::find_slice(const std::string& id) const {
  auto it = slices_.find(id);
  return it == slices_.end() ? nullptr : &it->second;
}

const Slice& Orchestrator::slice(const std::string& id) const {
  const Slice* s = find_slice(id);
  if (!s) throw NotFoundError("unknown slice " + id);
  return *s;
}

std::string Orchestrator::event_log_text() const {
  std::string out;
  for (const auto& line : events_) {
    out += line;
    out += '\n';
  }
  return out;
}

std::vector<std::string> Orchestrator::check_invariants() const {
  std::vector<std::string> out = validate_inventory(inventory_);
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };

  for (const auto& n : inventory_.nodes) {
    const NodeRuntime& rt = emu_.node(n.id);
    if (rt.count() > n.max_instances) {
      fail("node " + n.id + ": instance count above max_instances");
    }
    if (!rv_fits(rt.used().compute_only(), n.capacity)) {
      fail("node " + n.id + ": running demand exceeds capacity");
    }
    const NodeBook& book = node_book_.at(n.id);
    if (book.reserved_count < 0 || !book.reserved.well_formed()) {
      fail("node " + n.id + ": negative reservation");
    }
    if (config_.oversubscription == 1.0 &&
        !rv_fits(book.reserved, n.capacity)) {
      fail("node " + n.id + ": reservations exceed capacity");
    }
  }
  for (const auto& s : inventory_.sites) {
    auto it = site_radio_reserved_.find(s.id);
    if (it == site_radio_reserved_.end()) continue;
    for (const auto& [rat, units] : it->second) {
      if (units < 0) fail("site " + s.id + ": negative radio reservation");
      auto cap = s.radio_capacity.find(rat);
      std::int64_t limit = cap == s.radio_capacity.end() ? 0 : cap->second;
      if (units > limit) fail("site " + s.id + ": radio over-reserved");
    }
  }
  for (const auto& [key, reserved] : wan_reserved_) {
    if (reserved < 0) {
      fail("wan " + key.first + "--" + key.second + ": negative reservation");
    }
    const Site* site = inventory_.find_site(key.first);
    if (site) {
      for (const auto& wl : site->wan_links) {
        if (wl.peer_site == key.second && reserved > wl.bandwidth_mbps) {
          fail("wan " + key.first + "--" + key.second + ": over-reserved");
        }
      }
    }
  }
  for (const auto& [eq_id, vcs] : vcontrollers_) {
    const Equipment* eq = inventory_.find_equipment(eq_id);
    if (!eq) {
      fail("vcontrollers on unknown equipment " + eq_id);
      continue;
    }
    if (static_cast<int>(vcs.size()) > eq->max_vcontrollers) {
      fail("equipment " + eq_id + ": vController slots exceeded");
    }
    std::set<std::string> slices_seen;
    for (const auto& vc : vcs) {
      if (!slices_seen.insert(vc.slice_id).second) {
        fail("equipment " + eq_id + ": two vControllers for one slice");
      }
      if (vc.config_version < 1) {
        fail("vController " + vc.id + ": config_version < 1");
      }
    }
  }
  InventorySnapshot snap = build_snapshot();
  for (const auto& [id, slice] : slices_) {
    bool should_have_plan = slice.state != SliceState::REQUESTED &&
                            slice.state != SliceState::REJECTED;
    if (slice.plan.has_value() != should_have_plan) {
      fail("slice " + id + ": plan presence violates state invariant");
    }
    if (!slice.plan) continue;
    for (const auto& vf : slice.blueprint.vfs) {
      if (!slice.plan->assignments.count(vf.name)) {
        fail("slice " + id + ": VF " + vf.name + " unassigned");
      }
    }
    for (std::size_t i = 0; i < slice.blueprint.vlinks.size(); ++i) {
      auto rit = slice.plan->link_routes.find(static_cast<int>(i));
      if (rit == slice.plan->link_routes.end()) {
        fail("slice " + id + ": vlink " + std::to_string(i) + " unrouted");
        continue;
      }
      if (rit->second.latency_ms >
          slice.blueprint.vlinks[i].max_latency_ms + 1e-9) {
        fail("slice " + id + ": vlink " + std::to_string(i) +
             " violates max_latency");
      }
    }
  }
  return out;
}

std::string Orchestrator::snapshot_json() const {
  json snap = json::object();
  snap["inventory"] = inventory_to_json(inventory_);
  json nodes = json::object();
  for (const auto& [node_id, book] : node_book_) {
    json running = json::array();
    for (const auto& inst : emu_.node(node_id).instances) {
      running.push_back(instance_to_json(inst));
    }
    nodes[node_id] = {{"reserved", rv_to_json(book.reserved)},
                      {"reserved_count", book.reserved_count},
                      {"running_instances", running}};
  }
  snap["nodes"] = nodes;
  json radio = json::object();
  for (const auto& [site_id, units] : site_radio_reserved_) {
    json per_site = json::object();
    for (const auto& [rat, n] : units) {
      if (n != 0) per_site[rat_name(rat)] = n;
    }
    if (!per_site.empty()) radio[site_id] = per_site;
  }
  snap["site_radio_reserved"] = radio;
  json wan = json::object();
  for (const auto& [key, reserved] : wan_reserved_) {
    if (reserved != 0) wan[key.first + "|" + key.second] = reserved;
  }
  snap["wan_reserved"] = wan;
  json vcs = json::object();
  for (const auto& [eq_id, list] : vcontrollers_) {
    if (list.empty()) continue;
    json arr = json::array();
    for (const auto& vc : list) {
      arr.push_back({{"id", vc.id},
                     {"equipment_id", vc.equipment_id},
                     {"slice_id", vc.slice_id},
                     {"owner", vc.owner},
                     {"config_version", vc.config_version}});
    }
    vcs[eq_id] = arr;
  }
  snap["vcontrollers"] = vcs;
  json slices = json::object();
  for (const auto& [id, slice] : slices_) {
    if (slice.state == SliceState::TERMINATED ||
        slice.state == SliceState::REJECTED) {
      continue;  // hold no resources; excluded so round trips compare equal
    }
    json s = json::object();
    s["state"] = slice_state_name(slice.state);
    s["arrival"] = slice.arrival;
    s["blueprint"] = blueprint_to_json(slice.blueprint);
    if (slice.plan) s["plan"] = plan_to_json(*slice.plan);
    if (slice.response_time_s) s["response_time_s"] = *slice.response_time_s;
    s["instances"] = slice.instances;
    s["federations"] = slice.federations;
    slices[id] = s;
  }
  snap["slices"] = slices;
  json grants = json::object();
  for (const auto& [id, grant] : grants_) {
    json actions = json::array();
    for (GrantAction a : grant.actions) actions.push_back(grant_action_name(a));
    grants[id] = {{"grantor", grant.grantor},
                  {"grantee", grant.grantee},
                  {"scope", grant.scope},
                  {"actions", actions},
                  {"expiry", grant.expiry}};
  }
  snap["grants"] = grants;
  json feds = json::object();
  for (const auto& [id, link] : federation_.links()) {
    if (link.state == FederationState::CLOSED) continue;
    json rules = json::array();
    for (const auto& rule : link.rules) rules.push_back(sfi_rule_to_json(rule));
    feds[id] = {{"exporter_slice_id", link.exporter_slice_id},
                {"importer_slice_id", link.importer_slice_id},
                {"exporter_tenant", link.exporter_tenant},
                {"importer_tenant", link.importer_tenant},
                {"state", federation_state_name(link.state)},
                {"consents", link.consents},
                {"rules", rules}};
  }
  snap["federations"] = feds;
  return snap.dump(2) + "\n";
}

Orchestrator Orchestrator::from_snapshot(const std::string& snapshot_text,
                                         OrchestratorConfig config) {
  json snap = json::parse(snapshot_text);
  Orchestrator orch(inventory_from_json(snap.at("inventory")), config);
  for (const auto& [node_id, entry] : snap.at("nodes").items()) {
    NodeBook& book = orch.node_book_.at(node_id);
    book.reserved = rv_from_json(entry.at("reserved"), "/nodes/reserved");
    book.reserved_count = entry.at("reserved_count").get<int>();
    std::vector<VFInstance> instances;
    for (const auto& inst : entry.at("running_instances")) {
      instances.push_back(instance_from_json(inst, "/nodes/running_instances"));
    }
    orch.emu_.restore_instances(node_id, std::move(instances));
  }
  for (const auto& [site_id, units] : snap.at("site_radio_reserved").items()) {
    for (const auto& [rat, n] : units.items()) {
      orch.site_radio_reserved_[site_id][rat_from_name(rat)] =
          n.get<std::int64_t>();
    }
  }
  for (const auto& [key, reserved] : snap.at("wan_reserved").items()) {
    auto sep = key.find('|');
    orch.wan_reserved_[{key.substr(0, sep), key.substr(sep + 1)}] =
        reserved.get<std::int64_t>();
  }
  for (const auto& [eq_id, list] : snap.at("vcontrollers").items()) {
    for (const auto& entry : list) {
      VController vc;
      vc.id = entry.at("id").get<std::string>();
      vc.equipment_id = entry.at("equipment_id").get<std::string>();
      vc.slice_id = entry.at("slice_id").get<std::string>();
      vc.owner = entry.at("owner").get<std::string>();
      vc.config_version = entry.at("config_version").get<std::uint64_t>();
      std::uint64_t n = std::strtoull(vc.id.c_str() + 3, nullptr, 10);
      if (n >= orch.next_vcontroller_) orch.next_vcontroller_ = n + 1;
      orch.vcontrollers_[eq_id].push_back(std::move(vc));
    }
  }
  for (const auto& [id, entry] : snap.at("slices").items()) {
    Slice slice;
    slice.id = id;
    slice.state = slice_state_from_name(entry.at("state").get<std::string>());
    slice.arrival = entry.at("arrival").get<LogicalTime>();
    slice.blueprint = blueprint_from_json(entry.at("blueprint"));
    if (entry.contains("plan")) slice.plan = plan_from_json(entry.at("plan"));
    if (entry.contains("response_time_s")) {
      slice.response_time_s = entry.at("response_time_s").get<double>();
    }
    for (const auto& inst : entry.at("instances")) {
      slice.instances.push_back(inst.get<std::string>());
    }
    for (const auto& fed : entry.at("federations")) {
      slice.federations.push_back(fed.get<std::string>());
    }
    std::uint64_t n = std::strtoull(id.c_str() + 3, nullptr, 10);
    if (n >= orch.next_slice_) orch.next_slice_ = n + 1;
    if (slice.state == SliceState::REQUESTED) orch.pending_.push_back(id);
    orch.slices_[id] = std::move(slice);
  }
  for (const auto& [id, entry] : snap.at("grants").items()) {
    DelegationGrant grant;
    grant.id = id;
    grant.grantor = entry.at("grantor").get<std::string>();
    grant.grantee = entry.at("grantee").get<std::string>();
    for (const auto& s : entry.at("scope")) {
      grant.scope.insert(s.get<std::string>());
    }
    for (const auto& a : entry.at("actions")) {
      grant.actions.insert(grant_action_from_name(a.get<std::string>()));
    }
    grant.expiry = entry.at("expiry").get<LogicalTime>();
    std::uint64_t n = std::strtoull(id.c_str() + 3, nullptr, 10);
    if (n >= orch.next_grant_) orch.next_grant_ = n + 1;
    orch.grants_[id] = std::move(grant);
  }
  for (const auto& [id, entry] : snap.at("federations").items()) {
    FederationLink link;
    link.id = id;
    link.exporter_slice_id = entry.at("exporter_slice_id").get<std::string>();
    link.importer_slice_id = entry.at("importer_slice_id").get<std::string>();
    link.exporter_tenant = entry.at("exporter_tenant").get<std::string>();
    link.importer_tenant = entry.at("importer_tenant").get<std::string>();
    link.rules = sfi_rules_from_json(entry.at("rules"), "/federations/rules");
    link.state = entry.at("state").get<std::string>() == "ACTIVE"
                     ? FederationState::ACTIVE
                     : FederationState::PROPOSED;
    for (const auto& consent : entry.at("consents")) {
      link.consents.insert(consent.get<std::string>());
    }
    orch.federation_.restore_link(std::move(link));
  }
  return orch;
}

}  // namespace slicenet
