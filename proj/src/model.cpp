#include "slicenet/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace slicenet {

const char* tenant_role_name(TenantRole role) {
  switch (role) {
    case TenantRole::PRODUCT_OWNER: return "PRODUCT_OWNER";
    case TenantRole::PRODUCT_MANUFACTURER: return "PRODUCT_MANUFACTURER";
    case TenantRole::EQUIPMENT_VENDOR: return "EQUIPMENT_VENDOR";
    case TenantRole::EXTERNAL_OPERATOR: return "EXTERNAL_OPERATOR";
  }
  return "?";
}

TenantRole tenant_role_from_name(const std::string& name) {
  if (name == "PRODUCT_OWNER") return TenantRole::PRODUCT_OWNER;
  if (name == "PRODUCT_MANUFACTURER") return TenantRole::PRODUCT_MANUFACTURER;
  if (name == "EQUIPMENT_VENDOR") return TenantRole::EQUIPMENT_VENDOR;
  if (name == "EXTERNAL_OPERATOR") return TenantRole::EXTERNAL_OPERATOR;
  throw ValidationError(name, "unknown tenant role");
}

const char* equipment_kind_name(EquipmentKind kind) {
  switch (kind) {
    case EquipmentKind::ROBOT: return "ROBOT";
    case EquipmentKind::SENSOR: return "SENSOR";
    case EquipmentKind::ACTUATOR: return "ACTUATOR";
    case EquipmentKind::PLC: return "PLC";
  }
  return "?";
}

EquipmentKind equipment_kind_from_name(const std::string& name) {
  if (name == "ROBOT") return EquipmentKind::ROBOT;
  if (name == "SENSOR") return EquipmentKind::SENSOR;
  if (name == "ACTUATOR") return EquipmentKind::ACTUATOR;
  if (name == "PLC") return EquipmentKind::PLC;
  throw ValidationError(name, "unknown equipment kind");
}

const char* vf_kind_name(VFKind kind) {
  return kind == VFKind::VNF ? "VNF" : "VAF";
}

VFKind vf_kind_from_name(const std::string& name) {
  if (name == "VNF") return VFKind::VNF;
  if (name == "VAF") return VFKind::VAF;
  throw ValidationError(name, "unknown VF kind (expected VNF or VAF)");
}

const char* sensitivity_name(Sensitivity s) {
  switch (s) {
    case Sensitivity::PUBLIC: return "PUBLIC";
    case Sensitivity::CONFIDENTIAL: return "CONFIDENTIAL";
    case Sensitivity::LOCAL_ONLY: return "LOCAL_ONLY";
  }
  return "?";
}

Sensitivity sensitivity_from_name(const std::string& name) {
  if (name == "PUBLIC") return Sensitivity::PUBLIC;
  if (name == "CONFIDENTIAL") return Sensitivity::CONFIDENTIAL;
  if (name == "LOCAL_ONLY") return Sensitivity::LOCAL_ONLY;
  throw ValidationError(name, "unknown sensitivity label");
}

const char* flow_direction_name(FlowDirection d) {
  return d == FlowDirection::INBOUND ? "INBOUND" : "OUTBOUND";
}

FlowDirection flow_direction_from_name(const std::string& name) {
  if (name == "INBOUND") return FlowDirection::INBOUND;
  if (name == "OUTBOUND") return FlowDirection::OUTBOUND;
  throw ValidationError(name, "unknown direction (expected INBOUND/OUTBOUND)");
}

const char* aggregate_fn_name(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::MEAN: return "MEAN";
    case AggregateFn::MIN: return "MIN";
    case AggregateFn::MAX: return "MAX";
    case AggregateFn::COUNT: return "COUNT";
  }
  return "?";
}

AggregateFn aggregate_fn_from_name(const std::string& name) {
  if (name == "MEAN") return AggregateFn::MEAN;
  if (name == "MIN") return AggregateFn::MIN;
  if (name == "MAX") return AggregateFn::MAX;
  if (name == "COUNT") return AggregateFn::COUNT;
  throw ValidationError(name, "unknown aggregate function");
}

const VFSpec* SliceBlueprint::find_vf(const std::string& name) const {
  for (const auto& vf : vfs) {
    if (vf.name == name) return &vf;
  }
  return nullptr;
}

const StreamSpec* SliceBlueprint::find_stream(const std::string& id) const {
  for (const auto& s : streams) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const Tenant* Inventory::find_tenant(const std::string& id) const {
  for (const auto& t : tenants) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const Site* Inventory::find_site(const std::string& id) const {
  for (const auto& s : sites) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const EdgeNode* Inventory::find_node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Equipment* Inventory::find_equipment(const std::string& id) const {
  for (const auto& e : equipment) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::vector<std::string> validate_inventory(const Inventory& inv) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };

  std::set<std::string> ids;
  for (const auto& t : inv.tenants) {
    if (!ids.insert(t.id).second) fail("duplicate tenant id: " + t.id);
  }
  ids.clear();
  for (const auto& s : inv.sites) {
    if (!ids.insert(s.id).second) fail("duplicate site id: " + s.id);
    if (s.intra_site_latency_ms < 0) {
      fail("site " + s.id + ": negative intra_site_latency_ms");
    }
    if (!inv.find_tenant(s.owner)) {
      fail("site " + s.id + ": unknown owner tenant " + s.owner);
    }
    for (const auto& [rat, units] : s.radio_capacity) {
      if (units < 0) fail("site " + s.id + ": negative radio capacity");
    }
  }
  // wan_links symmetric: if A lists B, B lists A with equal latency.
  for (const auto& s : inv.sites) {
    for (const auto& wl : s.wan_links) {
      const Site* peer = inv.find_site(wl.peer_site);
      if (!peer) {
        fail("site " + s.id + ": wan link to unknown site " + wl.peer_site);
        continue;
      }
      bool mirrored = false;
      for (const auto& back : peer->wan_links) {
        if (back.peer_site == s.id &&
            std::abs(back.latency_ms - wl.latency_ms) < 1e-9 &&
            back.bandwidth_mbps == wl.bandwidth_mbps) {
          mirrored = true;
          break;
        }
      }
      if (!mirrored) {
        fail("wan link " + s.id + "->" + wl.peer_site +
             " has no symmetric peer entry");
      }
    }
  }
  ids.clear();
  for (const auto& n : inv.nodes) {
    if (!ids.insert(n.id).second) fail("duplicate node id: " + n.id);
    if (!inv.find_site(n.site_id)) {
      fail("node " + n.id + ": unknown site " + n.site_id);
    }
    if (n.max_instances <= 0) fail("node " + n.id + ": max_instances <= 0");
    if (!n.capacity.well_formed()) fail("node " + n.id + ": bad capacity");
  }
  ids.clear();
  for (const auto& e : inv.equipment) {
    if (!ids.insert(e.id).second) fail("duplicate equipment id: " + e.id);
    if (!inv.find_site(e.site_id)) {
      fail("equipment " + e.id + ": unknown site " + e.site_id);
    }
    if (e.max_vcontrollers <= 0) {
      fail("equipment " + e.id + ": max_vcontrollers <= 0");
    }
  }
  // Site.nodes lists must match the node table when present.
  for (const auto& s : inv.sites) {
    for (const auto& nid : s.nodes) {
      const EdgeNode* n = inv.find_node(nid);
      if (!n || n->site_id != s.id) {
        fail("site " + s.id + ": node list entry " + nid +
             " does not belong to the site");
      }
    }
  }
  return out;
}

namespace {

std::string idx_path(const std::string& field, std::size_t i,
                     const std::string& sub) {
  std::ostringstream os;
  os << field << "[" << i << "]";
  if (!sub.empty()) os << "." << sub;
  return os.str();
}

}  // namespace

void validate_blueprint(const SliceBlueprint& bp, const Inventory& inv) {
  if (bp.id.empty()) throw ValidationError("id", "blueprint id is empty");
  if (!inv.find_tenant(bp.tenant_id)) {
    throw ValidationError("tenant_id", "unknown tenant " + bp.tenant_id);
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < bp.vfs.size(); ++i) {
    const VFSpec& vf = bp.vfs[i];
    if (vf.name.empty()) {
      throw ValidationError(idx_path("vfs", i, "name"), "empty VF name");
    }
    if (!names.insert(vf.name).second) {
      throw ValidationError(idx_path("vfs", i, "name"),
                            "duplicate VF name " + vf.name);
    }
    if (!vf.demand.well_formed()) {
      throw ValidationError(idx_path("vfs", i, "demand"),
                            "negative demand component");
    }
    if (vf.site_affinity && !inv.find_site(*vf.site_affinity)) {
      throw ValidationError(idx_path("vfs", i, "site_affinity"),
                            "unknown site " + *vf.site_affinity);
    }
    if (vf.equipment_binding && !inv.find_equipment(*vf.equipment_binding)) {
      throw ValidationError(idx_path("vfs", i, "equipment_binding"),
                            "unknown equipment " + *vf.equipment_binding);
    }
  }
  auto endpoint_ok = [&](const std::string& ep) {
    return bp.find_vf(ep) != nullptr || inv.find_equipment(ep) != nullptr;
  };
  for (std::size_t i = 0; i < bp.vlinks.size(); ++i) {
    const VLinkSpec& vl = bp.vlinks[i];
    if (!endpoint_ok(vl.endpoint_a)) {
      throw ValidationError(idx_path("vlinks", i, "endpoint_a"),
                            "dangling endpoint " + vl.endpoint_a);
    }
    if (!endpoint_ok(vl.endpoint_b)) {
      throw ValidationError(idx_path("vlinks", i, "endpoint_b"),
                            "dangling endpoint " + vl.endpoint_b);
    }
    if (vl.max_latency_ms <= 0) {
      throw ValidationError(idx_path("vlinks", i, "max_latency_ms"),
                            "must be > 0");
    }
    if (vl.bandwidth_mbps < 0) {
      throw ValidationError(idx_path("vlinks", i, "bandwidth_mbps"),
                            "must be >= 0");
    }
  }
  std::set<std::string> stream_ids;
  for (std::size_t i = 0; i < bp.streams.size(); ++i) {
    const StreamSpec& st = bp.streams[i];
    if (st.id.empty()) {
      throw ValidationError(idx_path("streams", i, "id"), "empty stream id");
    }
    if (!stream_ids.insert(st.id).second) {
      throw ValidationError(idx_path("streams", i, "id"),
                            "duplicate stream id " + st.id);
    }
    if (!endpoint_ok(st.producer)) {
      throw ValidationError(idx_path("streams", i, "producer"),
                            "unknown producer " + st.producer);
    }
  }
  for (std::size_t i = 0; i < bp.federations.size(); ++i) {
    const FederationProposal& fp = bp.federations[i];
    if (fp.exporter_slice_id.empty()) {
      throw ValidationError(idx_path("federations", i, "exporter_slice_id"),
                            "empty exporter slice id");
    }
    for (std::size_t r = 0; r < fp.rules.size(); ++r) {
      const SFIRule& rule = fp.rules[r];
      std::ostringstream base;
      base << "federations[" << i << "].rules[" << r << "]";
      if (rule.stream_id.empty()) {
        throw ValidationError(base.str() + ".stream_id", "empty stream id");
      }
      if (rule.transform.kind == TransformKind::REDACT &&
          rule.transform.redact_fields.empty()) {
        throw ValidationError(base.str() + ".transform.fields",
                              "REDACT field list must be non-empty");
      }
      if (rule.transform.kind == TransformKind::AGGREGATE &&
          rule.transform.window <= 0) {
        throw ValidationError(base.str() + ".transform.window", "must be > 0");
      }
    }
  }
}

}  // namespace slicenet
