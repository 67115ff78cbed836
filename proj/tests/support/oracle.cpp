#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace slicenet::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::string, std::string> canonical(const std::string& a,
                                              const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

SiteTopology SiteTopology::build(const Inventory& inv) {
  SiteTopology topo;
  for (const auto& s : inv.sites) {
    topo.index[s.id] = static_cast<int>(topo.sites.size());
    topo.sites.push_back(s.id);
  }
  int n = static_cast<int>(topo.sites.size());
  topo.wan_latency.assign(n, std::vector<double>(n, kInf));
  std::vector<std::vector<int>> next(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) {
    topo.wan_latency[i][i] = 0;
    next[i][i] = i;
  }
  for (const auto& s : inv.sites) {
    int a = topo.index.at(s.id);
    for (const auto& wl : s.wan_links) {
      int b = topo.index.at(wl.peer_site);
      if (wl.latency_ms < topo.wan_latency[a][b]) {
        topo.wan_latency[a][b] = wl.latency_ms;
        topo.wan_latency[b][a] = wl.latency_ms;
        next[a][b] = b;
        next[b][a] = a;
      }
    }
  }
  // Floyd-Warshall with path reconstruction via the `next` matrix.
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double via = topo.wan_latency[i][k] + topo.wan_latency[k][j];
        if (via < topo.wan_latency[i][j]) {
          topo.wan_latency[i][j] = via;
          next[i][j] = next[i][k];
        }
      }
    }
  }
  topo.paths.assign(
      n, std::vector<std::vector<std::pair<std::string, std::string>>>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || next[i][j] == -1) continue;
      int cur = i;
      while (cur != j) {
        int nxt = next[cur][j];
        topo.paths[i][j].push_back(
            canonical(topo.sites[cur], topo.sites[nxt]));
        cur = nxt;
      }
    }
  }
  return topo;
}

std::optional<double> SiteTopology::end_to_end_latency(
    const Inventory& inv, const std::string& site_a,
    const std::string& site_b) const {
  const Site* a = inv.find_site(site_a);
  const Site* b = inv.find_site(site_b);
  if (!a || !b) return std::nullopt;
  if (site_a == site_b) return a->intra_site_latency_ms;
  double wan = wan_latency[index.at(site_a)][index.at(site_b)];
  if (wan == kInf) return std::nullopt;
  return a->intra_site_latency_ms + wan + b->intra_site_latency_ms;
}

namespace {

struct EndpointInfo {
  bool is_vf = false;
  int vf_index = -1;
  std::string equipment_site;
};

EndpointInfo resolve_endpoint(const OracleInstance& inst,
                              const std::string& ep) {
  EndpointInfo info;
  for (int i = 0; i < static_cast<int>(inst.blueprint.vfs.size()); ++i) {
    if (inst.blueprint.vfs[i].name == ep) {
      info.is_vf = true;
      info.vf_index = i;
      return info;
    }
  }
  const Equipment* eq = inst.inventory.find_equipment(ep);
  if (eq) info.equipment_site = eq->site_id;
  return info;
}

// Shared constraint check for one complete assignment (vf index -> node
// index). Also reused by validate_plan.
bool assignment_ok(const OracleInstance& inst, const SiteTopology& topo,
                   const std::vector<int>& assignment,
                   std::vector<std::string>* why) {
  const auto& nodes = inst.inventory.nodes;
  const auto& vfs = inst.blueprint.vfs;
  auto fail = [&](const std::string& msg) {
    if (why) why->push_back(msg);
    return false;
  };

  std::vector<ResourceVector> node_load(nodes.size());
  std::vector<int> node_count(nodes.size(), 0);
  std::map<std::string, std::map<Rat, std::int64_t>> site_radio;
  for (std::size_t v = 0; v < vfs.size(); ++v) {
    int n = assignment[v];
    const EdgeNode& node = nodes[n];
    node_load[n] = rv_add(node_load[n], vfs[v].demand.compute_only());
    node_count[n] += 1;
    for (const auto& [rat, units] : vfs[v].demand.radio_units) {
      site_radio[node.site_id][rat] += units;
    }
    if (vfs[v].site_affinity && node.site_id != *vfs[v].site_affinity) {
      return fail("affinity violated for " + vfs[v].name);
    }
    if (vfs[v].equipment_binding) {
      const Equipment* eq =
          inst.inventory.find_equipment(*vfs[v].equipment_binding);
      if (!eq || eq->site_id != node.site_id) {
        return fail("equipment binding violated for " + vfs[v].name);
      }
    }
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (node_count[n] > nodes[n].max_instances) {
      return fail("instance cap exceeded on " + nodes[n].id);
    }
    if (!rv_fits(node_load[n], nodes[n].capacity)) {
      return fail("capacity exceeded on " + nodes[n].id);
    }
  }
  for (const auto& [site_id, radios] : site_radio) {
    const Site* site = inst.inventory.find_site(site_id);
    for (const auto& [rat, units] : radios) {
      auto cap = site->radio_capacity.find(rat);
      std::int64_t limit = cap == site->radio_capacity.end() ? 0 : cap->second;
      if (units > limit) return fail("radio exceeded at " + site_id);
    }
  }

  std::map<std::pair<std::string, std::string>, std::int64_t> wan_load;
  for (std::size_t l = 0; l < inst.blueprint.vlinks.size(); ++l) {
    const VLinkSpec& vl = inst.blueprint.vlinks[l];
    auto site_of = [&](const std::string& ep) -> std::string {
      EndpointInfo info = resolve_endpoint(inst, ep);
      if (info.is_vf) return nodes[assignment[info.vf_index]].site_id;
      return info.equipment_site;
    };
    std::string sa = site_of(vl.endpoint_a);
    std::string sb = site_of(vl.endpoint_b);
    auto latency = topo.end_to_end_latency(inst.inventory, sa, sb);
    if (!latency) return fail("no route for vlink " + std::to_string(l));
    if (*latency > vl.max_latency_ms) {
      return fail("latency exceeded for vlink " + std::to_string(l));
    }
    if (sa != sb && vl.bandwidth_mbps > 0) {
      for (const auto& hop :
           topo.paths[topo.index.at(sa)][topo.index.at(sb)]) {
        wan_load[hop] += vl.bandwidth_mbps;
      }
    }
  }
  for (const auto& [hop, load] : wan_load) {
    const Site* site = inst.inventory.find_site(hop.first);
    std::int64_t capacity = -1;
    for (const auto& wl : site->wan_links) {
      if (wl.peer_site == hop.second) capacity = wl.bandwidth_mbps;
    }
    if (capacity < 0 || load > capacity) {
      return fail("wan bandwidth exceeded on " + hop.first + "--" +
                  hop.second);
    }
  }
  return true;
}

}  // namespace

bool exhaustive_feasible(const OracleInstance& inst) {
  const std::size_t vf_count = inst.blueprint.vfs.size();
  const std::size_t node_count = inst.inventory.nodes.size();
  SiteTopology topo = SiteTopology::build(inst.inventory);
  if (vf_count == 0) {
    return assignment_ok(inst, topo, {}, nullptr);
  }
  if (node_count == 0) return false;
  std::vector<int> assignment(vf_count, 0);
  while (true) {
    if (assignment_ok(inst, topo, assignment, nullptr)) return true;
    // Next assignment in base node_count.
    std::size_t pos = 0;
    while (pos < vf_count) {
      assignment[pos] += 1;
      if (assignment[pos] < static_cast<int>(node_count)) break;
      assignment[pos] = 0;
      pos += 1;
    }
    if (pos == vf_count) return false;
  }
}

std::vector<std::string> validate_plan(const OracleInstance& inst,
                                       const PlacementPlan& plan) {
  std::vector<std::string> out;
  const auto& vfs = inst.blueprint.vfs;
  std::vector<int> assignment(vfs.size(), -1);
  for (std::size_t v = 0; v < vfs.size(); ++v) {
    auto it = plan.assignments.find(vfs[v].name);
    if (it == plan.assignments.end()) {
      out.push_back("VF " + vfs[v].name + " unassigned");
      continue;
    }
    for (std::size_t n = 0; n < inst.inventory.nodes.size(); ++n) {
      if (inst.inventory.nodes[n].id == it->second) {
        assignment[v] = static_cast<int>(n);
      }
    }
    if (assignment[v] < 0) {
      out.push_back("VF " + vfs[v].name + " assigned to unknown node " +
                    it->second);
    }
  }
  if (!out.empty()) return out;
  SiteTopology topo = SiteTopology::build(inst.inventory);
  assignment_ok(inst, topo, assignment, &out);

  // Claimed route latencies must match an independent recomputation.
  for (std::size_t l = 0; l < inst.blueprint.vlinks.size(); ++l) {
    const VLinkSpec& vl = inst.blueprint.vlinks[l];
    auto rit = plan.link_routes.find(static_cast<int>(l));
    if (rit == plan.link_routes.end()) {
      out.push_back("vlink " + std::to_string(l) + " has no route");
      continue;
    }
    auto site_of = [&](const std::string& ep) -> std::string {
      EndpointInfo info = resolve_endpoint(inst, ep);
      if (info.is_vf) {
        return inst.inventory.nodes[assignment[info.vf_index]].site_id;
      }
      return info.equipment_site;
    };
    auto latency =
        topo.end_to_end_latency(inst.inventory, site_of(vl.endpoint_a),
                                site_of(vl.endpoint_b));
    if (!latency) {
      out.push_back("vlink " + std::to_string(l) + " unroutable");
      continue;
    }
    if (std::abs(*latency - rit->second.latency_ms) > 1e-6) {
      out.push_back("vlink " + std::to_string(l) + " latency claim " +
                    std::to_string(rit->second.latency_ms) +
                    " != recomputed " + std::to_string(*latency));
    }
    if (rit->second.latency_ms > vl.max_latency_ms + 1e-9) {
      out.push_back("vlink " + std::to_string(l) + " violates max_latency");
    }
  }
  return out;
}

OracleInstance random_instance(std::mt19937_64& rng) {
  auto pick = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % (hi - lo + 1));
  };
  auto chance = [&rng](double p) {
    return (rng() % 1000) < static_cast<std::uint64_t>(p * 1000);
  };

  OracleInstance inst;
  inst.inventory.tenants.push_back({"t0", TenantRole::PRODUCT_MANUFACTURER});

  int site_count = pick(1, 3);
  for (int s = 0; s < site_count; ++s) {
    Site site;
    site.id = "s" + std::to_string(s);
    site.owner = "t0";
    site.intra_site_latency_ms = pick(1, 5);
    for (Rat rat : {Rat::NB_IOT, Rat::URLLC, Rat::EMBB}) {
      if (chance(0.5)) site.radio_capacity[rat] = pick(0, 3);
    }
    inst.inventory.sites.push_back(std::move(site));
  }
  // Random tree keeps WAN paths unique.
  for (int s = 1; s < site_count; ++s) {
    int parent = pick(0, s - 1);
    WanLink forward{"s" + std::to_string(s), double(pick(10, 40)),
                    50LL * pick(1, 4)};
    WanLink backward{"s" + std::to_string(parent), forward.latency_ms,
                     forward.bandwidth_mbps};
    inst.inventory.sites[parent].wan_links.push_back(forward);
    inst.inventory.sites[s].wan_links.push_back(backward);
  }

  int node_count = pick(1, 4);
  for (int n = 0; n < node_count; ++n) {
    EdgeNode node;
    node.id = "n" + std::to_string(n);
    node.site_id = "s" + std::to_string(pick(0, site_count - 1));
    node.capacity.cpu_millicores = 100LL * pick(5, 20);
    node.capacity.memory_mb = 256LL * pick(2, 16);
    node.capacity.storage_mb = 1000LL * pick(1, 8);
    node.capacity.bandwidth_mbps = 50LL * pick(2, 20);
    node.max_instances = pick(2, 5);
    inst.inventory.nodes.push_back(std::move(node));
  }
  int equipment_count = pick(0, 2);
  for (int e = 0; e < equipment_count; ++e) {
    Equipment eq;
    eq.id = "eq" + std::to_string(e);
    eq.site_id = "s" + std::to_string(pick(0, site_count - 1));
    eq.kind = EquipmentKind::ROBOT;
    eq.max_vcontrollers = pick(1, 2);
    inst.inventory.equipment.push_back(std::move(eq));
  }
  for (auto& site : inst.inventory.sites) {
    for (const auto& n : inst.inventory.nodes) {
      if (n.site_id == site.id) site.nodes.push_back(n.id);
    }
  }

  inst.blueprint.id = "oracle-bp";
  inst.blueprint.tenant_id = "t0";
  int vf_count = pick(0, 6);
  for (int v = 0; v < vf_count; ++v) {
    VFSpec vf;
    vf.name = "vf" + std::to_string(v);
    vf.kind = chance(0.5) ? VFKind::VNF : VFKind::VAF;
    vf.demand.cpu_millicores = 50LL * pick(2, 18);
    vf.demand.memory_mb = 64LL * pick(1, 16);
    vf.demand.storage_mb = 100LL * pick(0, 5);
    vf.demand.bandwidth_mbps = 10LL * pick(1, 20);
    if (chance(0.25)) {
      Rat rat = std::array{Rat::NB_IOT, Rat::URLLC, Rat::EMBB}[rng() % 3];
      vf.demand.radio_units[rat] = pick(1, 2);
    }
    if (chance(0.15)) {
      vf.site_affinity = "s" + std::to_string(pick(0, site_count - 1));
    }
    if (equipment_count > 0 && chance(0.15)) {
      vf.equipment_binding = "eq" + std::to_string(pick(0, equipment_count - 1));
    }
    inst.blueprint.vfs.push_back(std::move(vf));
  }
  for (int a = 0; a < vf_count; ++a) {
    for (int b = a + 1; b < vf_count; ++b) {
      if (!chance(0.3)) continue;
      VLinkSpec vl;
      vl.endpoint_a = "vf" + std::to_string(a);
      vl.endpoint_b = "vf" + std::to_string(b);
      vl.max_latency_ms = chance(0.4) ? pick(2, 8) : pick(20, 100);
      vl.bandwidth_mbps = 10LL * pick(1, 10);
      inst.blueprint.vlinks.push_back(std::move(vl));
    }
  }
  if (vf_count > 0 && equipment_count > 0 && chance(0.3)) {
    VLinkSpec vl;
    vl.endpoint_a = "vf" + std::to_string(pick(0, vf_count - 1));
    vl.endpoint_b = "eq" + std::to_string(pick(0, equipment_count - 1));
    vl.max_latency_ms = chance(0.4) ? pick(2, 8) : pick(20, 100);
    vl.bandwidth_mbps = 10LL * pick(1, 5);
    inst.blueprint.vlinks.push_back(std::move(vl));
  }
  return inst;
}

}  // namespace slicenet::testing
