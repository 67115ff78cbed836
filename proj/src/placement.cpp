#include "slicenet/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "slicenet/errors.hpp"

namespace slicenet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-12;

std::pair<std::string, std::string> canonical(const std::string& a,
                                              const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// Mutable residual state threaded through one placement attempt.
struct Working {
  std::map<std::string, SnapshotNode> nodes;
  std::map<std::string, SnapshotSite> sites;
  std::map<std::pair<std::string, std::string>, SnapshotWanEdge> wan;

  explicit Working(const InventorySnapshot& snap)
      : nodes(snap.nodes), sites(snap.sites), wan(snap.wan) {}
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Cluster {
  std::vector<int> members;  // indices into the VF list
  std::optional<std::string> pin;
  std::string pin_source;  // for diagnostics
  std::map<Rat, std::int64_t> radio;
  double min_internal_latency = kInf;
  std::int64_t total_scalar = 0;
  std::string min_name;
};

double min_wan_latency(const InventorySnapshot& snap) {
  double m = kInf;
  for (const auto& [key, edge] : snap.wan) {
    m = std::min(m, edge.latency_ms);
  }
  return m;
}

// A link forces co-siting when no cross-site route could ever satisfy it.
bool is_tight(double max_latency_ms, double min_wan) {
  return max_latency_ms < min_wan;
}

struct ClusterFailureFlags {
  bool capacity = false;
  bool radio = false;
  bool latency = false;
};

PlacementFailure compose_failure(const ClusterFailureFlags& flags,
                                 const std::string& detail) {
  if (flags.capacity) {
    return {RejectReason::INSUFFICIENT_CAPACITY, detail};
  }
  if (flags.radio) {
    return {RejectReason::RADIO_EXHAUSTED, detail};
  }
  return {RejectReason::LATENCY_UNSATISFIABLE, detail};
}

// Places one cluster's VFs onto nodes of `site`, updating `work` on
// success. Returns the blocking dimension on failure.
std::optional<std::string> try_site(const std::vector<const VFSpec*>& members,
                                    const Cluster& cluster,
                                    const std::string& site_id, Working& work,
                                    std::map<std::string, std::string>& out) {
  const SnapshotSite& site = work.sites.at(site_id);
  if (site.intra_site_latency_ms > cluster.min_internal_latency) {
    return "latency";
  }
  for (const auto& [rat, units] : cluster.radio) {
    auto it = site.radio_residual.find(rat);
    std::int64_t avail = it == site.radio_residual.end() ? 0 : it->second;
    if (units > avail) return "radio";
  }

  std::map<std::string, std::string> assigned;
  std::map<std::string, SnapshotNode> nodes_backup = work.nodes;
  for (const VFSpec* vf : members) {
    // Nodes re-ranked against current residuals after every assignment.
    std::vector<const SnapshotNode*> candidates;
    for (const auto& [id, node] : work.nodes) {
      if (node.site_id == site_id) candidates.push_back(&node);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const SnapshotNode* a, const SnapshotNode* b) {
                std::int64_t sa = scalar_demand(a->residual);
                std::int64_t sb = scalar_demand(b->residual);
                if (sa != sb) return sa > sb;
                return a->id < b->id;
              });
    const SnapshotNode* chosen = nullptr;
    for (const SnapshotNode* cand : candidates) {
      if (cand->free_instance_slots < 1) continue;
      if (!rv_fits(vf->demand.compute_only(), cand->residual)) continue;
      chosen = cand;
      break;
    }
    if (!chosen) {
      work.nodes = nodes_backup;
      return "capacity";
    }
    SnapshotNode& node = work.nodes.at(chosen->id);
    node.residual = rv_sub(node.residual, vf->demand.compute_only());
    node.free_instance_slots -= 1;
    assigned[vf->name] = node.id;
  }
  SnapshotSite& site_mut = work.sites.at(site_id);
  for (const auto& [rat, units] : cluster.radio) {
    site_mut.radio_residual[rat] -= units;
  }
  for (auto& [vf, node] : assigned) out[vf] = node;
  return std::nullopt;
}

// Core first-fit-decreasing cluster assignment shared by place() and
// place_additions().
std::optional<PlacementFailure> assign_clusters(
    const std::vector<VFSpec>& vfs,
    const std::vector<std::pair<int, int>>& tight_pairs,
    const std::vector<std::pair<int, std::string>>& pins,
    const std::vector<std::tuple<int, int, double>>& internal_latency_caps,
    Working& work, std::map<std::string, std::string>& assignments) {
  if (vfs.empty()) return std::nullopt;

  UnionFind uf(static_cast<int>(vfs.size()));
  for (const auto& [a, b] : tight_pairs) uf.unite(a, b);

  std::map<int, Cluster> clusters;
  for (int i = 0; i < static_cast<int>(vfs.size()); ++i) {
    Cluster& c = clusters[uf.find(i)];
    c.members.push_back(i);
    c.total_scalar += scalar_demand(vfs[i].demand);
    for (const auto& [rat, units] : vfs[i].demand.radio_units) {
      c.radio[rat] += units;
    }
    if (c.min_name.empty() || vfs[i].name < c.min_name) {
      c.min_name = vfs[i].name;
    }
  }
  for (const auto& [vf_idx, site] : pins) {
    Cluster& c = clusters[uf.find(vf_idx)];
    if (c.pin && *c.pin != site) {
      return PlacementFailure{
          RejectReason::LATENCY_UNSATISFIABLE,
          "conflicting site pins for co-located VFs: " + *c.pin + " vs " +
              site + " (via " + vfs[vf_idx].name + ")"};
    }
    c.pin = site;
    c.pin_source = vfs[vf_idx].name;
  }
  for (const auto& [a, b, max_lat] : internal_latency_caps) {
    if (uf.find(a) == uf.find(b)) {
      Cluster& c = clusters[uf.find(a)];
      c.min_internal_latency = std::min(c.min_internal_latency, max_lat);
    }
  }

  std::vector<const Cluster*> order;
  for (const auto& [root, c] : clusters) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Cluster* a, const Cluster* b) {
    if (a->total_scalar != b->total_scalar) {
      return a->total_scalar > b->total_scalar;
    }
    return a->min_name < b->min_name;
  });

  for (const Cluster* cluster : order) {
    std::vector<const VFSpec*> members;
    for (int idx : cluster->members) members.push_back(&vfs[idx]);
    std::sort(members.begin(), members.end(),
              [](const VFSpec* a, const VFSpec* b) {
                std::int64_t sa = scalar_demand(a->demand);
                std::int64_t sb = scalar_demand(b->demand);
                if (sa != sb) return sa > sb;
                return a->name < b->name;
              });

    std::vector<std::string> candidates;
    if (cluster->pin) {
      if (!work.sites.count(*cluster->pin)) {
        return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                                "pinned to unknown site " + *cluster->pin};
      }
      candidates.push_back(*cluster->pin);
    } else {
      // Sites ranked by aggregate residual capacity, id ascending.
      std::vector<std::pair<std::int64_t, std::string>> ranked;
      for (const auto& [sid, site] : work.sites) {
        std::int64_t total = 0;
        for (const auto& [nid, node] : work.nodes) {
          if (node.site_id == sid) total += scalar_demand(node.residual);
        }
        ranked.emplace_back(total, sid);
      }
      std::sort(ranked.begin(), ranked.end(),
                [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return a.second < b.second;
                });
      for (const auto& [total, sid] : ranked) candidates.push_back(sid);
    }

    ClusterFailureFlags flags;
    bool done = false;
    for (const std::string& site_id : candidates) {
      Working saved = work;
      auto blocked = try_site(members, *cluster, site_id, work, assignments);
      if (!blocked) {
        done = true;
        break;
      }
      work = std::move(saved);
      if (*blocked == "capacity") flags.capacity = true;
      if (*blocked == "radio") flags.radio = true;
      if (*blocked == "latency") flags.latency = true;
    }
    if (!done) {
      return compose_failure(flags, "no site fits VF group containing " +
                                        cluster->min_name);
    }
  }
  return std::nullopt;
}

struct LinkToRoute {
  int index = 0;
  std::string site_a;
  std::string site_b;
  std::int64_t bandwidth_mbps = 0;
  double max_latency_ms = 0;
  std::string label;
};

std::optional<PlacementFailure> route_links(const std::vector<LinkToRoute>& links,
                                            Working& work,
                                            std::map<int, LinkRoute>& out) {
  InventorySnapshot view;  // static topology for pathfinding
  view.sites = work.sites;
  view.wan = work.wan;
  for (const auto& link : links) {
    LinkRoute route;
    if (link.site_a == link.site_b) {
      route.latency_ms = work.sites.at(link.site_a).intra_site_latency_ms;
    } else {
      auto wan_route = route_between_sites(view, link.site_a, link.site_b);
      if (!wan_route) {
        return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                                "no WAN path between " + link.site_a +
                                    " and " + link.site_b + " for " +
                                    link.label};
      }
      route = *wan_route;
      route.latency_ms += work.sites.at(link.site_a).intra_site_latency_ms +
                          work.sites.at(link.site_b).intra_site_latency_ms;
    }
    if (route.latency_ms > link.max_latency_ms) {
      return PlacementFailure{
          RejectReason::LATENCY_UNSATISFIABLE,
          link.label + ": route latency " + std::to_string(route.latency_ms) +
              " ms exceeds " + std::to_string(link.max_latency_ms) + " ms"};
    }
    route.bandwidth_mbps = link.bandwidth_mbps;
    if (link.bandwidth_mbps > 0) {
      for (const auto& hop : route.wan_hops) {
        auto key = canonical(hop.site_a, hop.site_b);
        if (work.wan.at(key).bandwidth_residual < link.bandwidth_mbps) {
          return PlacementFailure{RejectReason::INSUFFICIENT_CAPACITY,
                                  link.label + ": WAN bandwidth exhausted on " +
                                      key.first + "--" + key.second};
        }
      }
      for (const auto& hop : route.wan_hops) {
        auto key = canonical(hop.site_a, hop.site_b);
        work.wan.at(key).bandwidth_residual -= link.bandwidth_mbps;
      }
    }
    out[link.index] = route;
  }
  return std::nullopt;
}

}  // namespace

const char* reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::INSUFFICIENT_CAPACITY: return "INSUFFICIENT_CAPACITY";
    case RejectReason::LATENCY_UNSATISFIABLE: return "LATENCY_UNSATISFIABLE";
    case RejectReason::EQUIPMENT_EXHAUSTED: return "EQUIPMENT_EXHAUSTED";
    case RejectReason::RADIO_EXHAUSTED: return "RADIO_EXHAUSTED";
  }
  return "?";
}

const SnapshotWanEdge* InventorySnapshot::find_edge(
    const std::string& a, const std::string& b) const {
  auto it = wan.find(canonical(a, b));
  return it == wan.end() ? nullptr : &it->second;
}

std::optional<LinkRoute> route_between_sites(const InventorySnapshot& snap,
                                             const std::string& site_a,
                                             const std::string& site_b) {
  if (site_a == site_b) return LinkRoute{};
  std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
  for (const auto& [key, edge] : snap.wan) {
    adj[edge.site_a].emplace_back(edge.site_b, edge.latency_ms);
    adj[edge.site_b].emplace_back(edge.site_a, edge.latency_ms);
  }
  std::map<std::string, double> dist;
  std::map<std::string, std::string> prev;
  dist[site_a] = 0;
  std::set<std::pair<double, std::string>> frontier{{0.0, site_a}};
  while (!frontier.empty()) {
    auto [d, u] = *frontier.begin();
    frontier.erase(frontier.begin());
    if (u == site_b) break;
    for (const auto& [v, lat] : adj[u]) {
      double nd = d + lat;
      auto it = dist.find(v);
      if (it == dist.end() || nd < it->second - kTieEps) {
        if (it != dist.end()) frontier.erase({it->second, v});
        dist[v] = nd;
        prev[v] = u;
        frontier.insert({nd, v});
      } else if (std::abs(nd - it->second) <= kTieEps && u < prev[v]) {
        prev[v] = u;  // deterministic tie-break on equal-latency paths
      }
    }
  }
  auto it = dist.find(site_b);
  if (it == dist.end()) return std::nullopt;
  LinkRoute route;
  route.latency_ms = it->second;
  std::vector<std::string> chain{site_b};
  std::string cur = site_b;
  while (cur != site_a) {
    cur = prev.at(cur);
    chain.push_back(cur);
  }
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 1; i < chain.size(); ++i) {
    route.wan_hops.push_back({chain[i - 1], chain[i]});
  }
  return route;
}

std::optional<double> route_latency(const InventorySnapshot& snap,
                                    const std::string& site_a,
                                    const std::string& site_b) {
  if (site_a == site_b) {
    auto it = snap.sites.find(site_a);
    if (it == snap.sites.end()) return std::nullopt;
    return it->second.intra_site_latency_ms;
  }
  auto route = route_between_sites(snap, site_a, site_b);
  if (!route) return std::nullopt;
  return route->latency_ms + snap.sites.at(site_a).intra_site_latency_ms +
         snap.sites.at(site_b).intra_site_latency_ms;
}

PlaceResult place(const SliceBlueprint& bp, const InventorySnapshot& snap) {
  Working work(snap);
  double min_wan = min_wan_latency(snap);

  // Endpoint kind resolution: VF index or equipment site.
  auto vf_index = [&](const std::string& name) -> int {
    for (int i = 0; i < static_cast<int>(bp.vfs.size()); ++i) {
      if (bp.vfs[i].name == name) return i;
    }
    return -1;
  };
  auto equipment_site = [&](const std::string& id) -> const std::string* {
    auto it = snap.equipment.find(id);
    return it == snap.equipment.end() ? nullptr : &it->second.site_id;
  };

  std::vector<std::pair<int, int>> tight_pairs;
  std::vector<std::pair<int, std::string>> pins;
  std::vector<std::tuple<int, int, double>> internal_caps;
  for (int i = 0; i < static_cast<int>(bp.vfs.size()); ++i) {
    const VFSpec& vf = bp.vfs[i];
    if (vf.site_affinity) pins.emplace_back(i, *vf.site_affinity);
    if (vf.equipment_binding) {
      const std::string* site = equipment_site(*vf.equipment_binding);
      if (!site) {
        return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                                "unknown equipment " + *vf.equipment_binding};
      }
      pins.emplace_back(i, *site);
    }
  }
  for (const auto& vl : bp.vlinks) {
    int a = vf_index(vl.endpoint_a);
    int b = vf_index(vl.endpoint_b);
    if (a >= 0 && b >= 0) {
      internal_caps.emplace_back(a, b, vl.max_latency_ms);
      if (is_tight(vl.max_latency_ms, min_wan)) tight_pairs.emplace_back(a, b);
    } else if (a >= 0 || b >= 0) {
      int vf = a >= 0 ? a : b;
      const std::string& eq = a >= 0 ? vl.endpoint_b : vl.endpoint_a;
      if (is_tight(vl.max_latency_ms, min_wan)) {
        const std::string* site = equipment_site(eq);
        if (!site) {
          return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                                  "unknown equipment endpoint " + eq};
        }
        pins.emplace_back(vf, *site);
      }
    }
  }

  std::map<std::string, std::string> assignments;
  if (auto failure = assign_clusters(bp.vfs, tight_pairs, pins, internal_caps,
                                     work, assignments)) {
    return *failure;
  }

  auto endpoint_site = [&](const std::string& ep) -> std::string {
    int idx = vf_index(ep);
    if (idx >= 0) {
      return work.nodes.at(assignments.at(ep)).site_id;
    }
    return *equipment_site(ep);
  };

  std::vector<LinkToRoute> to_route;
  for (int i = 0; i < static_cast<int>(bp.vlinks.size()); ++i) {
    const VLinkSpec& vl = bp.vlinks[i];
    to_route.push_back({i, endpoint_site(vl.endpoint_a),
                        endpoint_site(vl.endpoint_b), vl.bandwidth_mbps,
                        vl.max_latency_ms,
                        "vlink " + vl.endpoint_a + "--" + vl.endpoint_b});
  }
  PlacementPlan plan;
  if (auto failure = route_links(to_route, work, plan.link_routes)) {
    return *failure;
  }
  plan.assignments = std::move(assignments);

  // Every equipment the slice touches needs a vController; ids are
  // allocated at admission.
  for (const auto& vf : bp.vfs) {
    if (vf.equipment_binding) plan.vcontroller_allocs[*vf.equipment_binding];
  }
  for (const auto& vl : bp.vlinks) {
    for (const std::string* ep : {&vl.endpoint_a, &vl.endpoint_b}) {
      if (vf_index(*ep) < 0 && snap.equipment.count(*ep)) {
        plan.vcontroller_allocs[*ep];
      }
    }
  }
  for (const auto& st : bp.streams) {
    if (vf_index(st.producer) < 0 && snap.equipment.count(st.producer)) {
      plan.vcontroller_allocs[st.producer];
    }
  }
  return plan;
}

PlaceResult place_additions(
    const std::vector<VFSpec>& adds, const std::vector<VLinkSpec>& add_links,
    const std::map<std::string, std::string>& existing_assignment,
    const InventorySnapshot& snap) {
  Working work(snap);
  double min_wan = min_wan_latency(snap);

  auto add_index = [&](const std::string& name) -> int {
    for (int i = 0; i < static_cast<int>(adds.size()); ++i) {
      if (adds[i].name == name) return i;
    }
    return -1;
  };
  auto existing_site = [&](const std::string& name) -> const std::string* {
    auto it = existing_assignment.find(name);
    if (it == existing_assignment.end()) return nullptr;
    return &snap.nodes.at(it->second).site_id;
  };
  auto equipment_site = [&](const std::string& id) -> const std::string* {
    auto it = snap.equipment.find(id);
    return it == snap.equipment.end() ? nullptr : &it->second.site_id;
  };

  std::vector<std::pair<int, int>> tight_pairs;
  std::vector<std::pair<int, std::string>> pins;
  std::vector<std::tuple<int, int, double>> internal_caps;
  for (int i = 0; i < static_cast<int>(adds.size()); ++i) {
    const VFSpec& vf = adds[i];
    if (vf.site_affinity) pins.emplace_back(i, *vf.site_affinity);
    if (vf.equipment_binding) {
      const std::string* site = equipment_site(*vf.equipment_binding);
      if (!site) {
        return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                                "unknown equipment " + *vf.equipment_binding};
      }
      pins.emplace_back(i, *site);
    }
  }
  for (const auto& vl : add_links) {
    int a = add_index(vl.endpoint_a);
    int b = add_index(vl.endpoint_b);
    if (a >= 0 && b >= 0) {
      internal_caps.emplace_back(a, b, vl.max_latency_ms);
      if (is_tight(vl.max_latency_ms, min_wan)) tight_pairs.emplace_back(a, b);
      continue;
    }
    if (a < 0 && b < 0) continue;  // between existing endpoints, route only
    int added = a >= 0 ? a : b;
    const std::string& other = a >= 0 ? vl.endpoint_b : vl.endpoint_a;
    if (!is_tight(vl.max_latency_ms, min_wan)) continue;
    const std::string* site = existing_site(other);
    if (!site) site = equipment_site(other);
    if (!site) {
      return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                              "unknown link endpoint " + other};
    }
    pins.emplace_back(added, *site);
  }

  std::map<std::string, std::string> assignments;
  if (auto failure = assign_clusters(adds, tight_pairs, pins, internal_caps,
                                     work, assignments)) {
    return *failure;
  }

  auto endpoint_site = [&](const std::string& ep) -> const std::string* {
    if (add_index(ep) >= 0) {
      return &work.nodes.at(assignments.at(ep)).site_id;
    }
    if (const std::string* s = existing_site(ep)) return s;
    return equipment_site(ep);
  };

  std::vector<LinkToRoute> to_route;
  for (int i = 0; i < static_cast<int>(add_links.size()); ++i) {
    const VLinkSpec& vl = add_links[i];
    const std::string* sa = endpoint_site(vl.endpoint_a);
    const std::string* sb = endpoint_site(vl.endpoint_b);
    if (!sa || !sb) {
      return PlacementFailure{RejectReason::LATENCY_UNSATISFIABLE,
                              "unresolved link endpoint in delta"};
    }
    to_route.push_back({i, *sa, *sb, vl.bandwidth_mbps, vl.max_latency_ms,
                        "vlink " + vl.endpoint_a + "--" + vl.endpoint_b});
  }
  PlacementPlan plan;
  if (auto failure = route_links(to_route, work, plan.link_routes)) {
    return *failure;
  }
  plan.assignments = std::move(assignments);
  for (const auto& vf : adds) {
    if (vf.equipment_binding) plan.vcontroller_allocs[*vf.equipment_binding];
  }
  for (const auto& vl : add_links) {
    for (const std::string* ep : {&vl.endpoint_a, &vl.endpoint_b}) {
      if (add_index(*ep) < 0 && snap.equipment.count(*ep)) {
        plan.vcontroller_allocs[*ep];
      }
    }
  }
  return plan;
}

}  // namespace slicenet
