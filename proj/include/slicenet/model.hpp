#ifndef SLICENET_MODEL_HPP_
#define SLICENET_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slicenet/resources.hpp"

namespace slicenet {

using LogicalTime = std::uint64_t;

enum class TenantRole {
  PRODUCT_OWNER,
  PRODUCT_MANUFACTURER,
  EQUIPMENT_VENDOR,
  EXTERNAL_OPERATOR
};

const char* tenant_role_name(TenantRole role);
TenantRole tenant_role_from_name(const std::string& name);

struct Tenant {
  std::string id;
  TenantRole role = TenantRole::PRODUCT_OWNER;
};

struct WanLink {
  std::string peer_site;
  double latency_ms = 0;
  std::int64_t bandwidth_mbps = 0;
};

struct Site {
  std::string id;
  std::string owner;  // tenant id
  double intra_site_latency_ms = 0;
  std::map<Rat, std::int64_t> radio_capacity;
  std::vector<std::string> nodes;  // EdgeNode ids, derived from the node list
  std::vector<WanLink> wan_links;
  bool local_core = false;
};

struct EdgeNode {
  std::string id;
  std::string site_id;
  ResourceVector capacity;
  int max_instances = 80;
};

enum class EquipmentKind { ROBOT, SENSOR, ACTUATOR, PLC };

const char* equipment_kind_name(EquipmentKind kind);
EquipmentKind equipment_kind_from_name(const std::string& name);

struct Equipment {
  std::string id;
  std::string site_id;
  EquipmentKind kind = EquipmentKind::SENSOR;
  int max_vcontrollers = 1;
};

// A virtualized controller slot on a physical device; exactly one slice each.
struct VController {
  std::string id;
  std::string equipment_id;
  std::string slice_id;
  std::string owner;  // tenant id
  std::uint64_t config_version = 1;
};

enum class VFKind { VNF, VAF };

const char* vf_kind_name(VFKind kind);
VFKind vf_kind_from_name(const std::string& name);

struct VFSpec {
  std::string name;  // unique within blueprint
  VFKind kind = VFKind::VNF;
  ResourceVector demand;
  std::optional<std::string> site_affinity;
  std::optional<std::string> equipment_binding;
};

// Endpoints are VF names of the same blueprint or equipment ids.
struct VLinkSpec {
  std::string endpoint_a;
  std::string endpoint_b;
  std::int64_t bandwidth_mbps = 0;
  double max_latency_ms = 0;
};

enum class Sensitivity { PUBLIC, CONFIDENTIAL, LOCAL_ONLY };

const char* sensitivity_name(Sensitivity s);
Sensitivity sensitivity_from_name(const std::string& name);

struct StreamSpec {
  std::string id;
  std::string producer;  // VF name or equipment id
  Sensitivity sensitivity = Sensitivity::PUBLIC;
};

enum class FlowDirection { INBOUND, OUTBOUND };

const char* flow_direction_name(FlowDirection d);
FlowDirection flow_direction_from_name(const std::string& name);

enum class AggregateFn { MEAN, MIN, MAX, COUNT };

const char* aggregate_fn_name(AggregateFn fn);
AggregateFn aggregate_fn_from_name(const std::string& name);

enum class TransformKind { PASS, REDACT, AGGREGATE };

struct Transform {
  TransformKind kind = TransformKind::PASS;
  std::vector<std::string> redact_fields;  // REDACT only, non-empty
  int window = 0;                          // AGGREGATE only, > 0
  AggregateFn function = AggregateFn::MEAN;
};

struct SFIRule {
  FlowDirection direction = FlowDirection::OUTBOUND;
  std::string stream_id;
  Transform transform;
};

// Federation proposal carried inside a blueprint: the new slice imports
// the named streams from an already running exporter slice.
struct FederationProposal {
  std::string exporter_slice_id;
  std::vector<SFIRule> rules;
};

// The tenant request: VF graph, virtual links, streams and federation
// proposals (the "Product Chain Blueprint").
struct SliceBlueprint {
  std::string id;
  std::string tenant_id;
  std::vector<VFSpec> vfs;
  std::vector<VLinkSpec> vlinks;
  std::vector<StreamSpec> streams;
  std::vector<FederationProposal> federations;

  const VFSpec* find_vf(const std::string& name) const;
  const StreamSpec* find_stream(const std::string& id) const;
};

struct Inventory {
  std::vector<Tenant> tenants;
  std::vector<Site> sites;
  std::vector<EdgeNode> nodes;
  std::vector<Equipment> equipment;

  const Tenant* find_tenant(const std::string& id) const;
  const Site* find_site(const std::string& id) const;
  const EdgeNode* find_node(const std::string& id) const;
  const Equipment* find_equipment(const std::string& id) const;
};

// Structural inventory checks: unique ids, known references, symmetric
// wan_links, well-formed capacities. Returns violation messages.
std::vector<std::string> validate_inventory(const Inventory& inv);

// Blueprint checks against an inventory (endpoint resolution, bindings,
// stream producers, rule shapes). Throws ValidationError with a
// bracket-style field path on the first violation.
void validate_blueprint(const SliceBlueprint& bp, const Inventory& inv);

}  // namespace slicenet

#endif  // SLICENET_MODEL_HPP_
