#include "slicenet/json_io.hpp"

#include <fstream>
#include <sstream>

#include "slicenet/errors.hpp"
#include "slicenet/orchestrator.hpp"

namespace slicenet {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

std::string idx(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

const json* find_key(const json& j, const std::string& path,
                     const char* key) {
  if (!j.is_object()) {
    throw ValidationError(path.empty() ? "/" : path, "expected an object");
  }
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require_key(const json& j, const std::string& path,
                        const char* key) {
  const json* found = find_key(j, path, key);
  if (!found) throw ValidationError(join(path, key), "missing required field");
  return *found;
}

std::string req_string(const json& j, const std::string& path,
                       const char* key) {
  const json& v = require_key(j, path, key);
  if (!v.is_string()) throw ValidationError(join(path, key), "expected string");
  return v.get<std::string>();
}

std::string opt_string(const json& j, const std::string& path, const char* key,
                       const std::string& fallback) {
  const json* v = find_key(j, path, key);
  if (!v) return fallback;
  if (!v->is_string()) {
    throw ValidationError(join(path, key), "expected string");
  }
  return v->get<std::string>();
}

std::int64_t nonneg_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ValidationError(path, "expected a non-negative integer");
  }
  std::int64_t n = v.get<std::int64_t>();
  if (n < 0) throw ValidationError(path, "must be >= 0");
  return n;
}

std::int64_t opt_nonneg(const json& j, const std::string& path,
                        const char* key, std::int64_t fallback) {
  const json* v = find_key(j, path, key);
  return v ? nonneg_int(*v, join(path, key)) : fallback;
}

double req_number(const json& j, const std::string& path, const char* key) {
  const json& v = require_key(j, path, key);
  if (!v.is_number()) throw ValidationError(join(path, key), "expected number");
  return v.get<double>();
}

double opt_number(const json& j, const std::string& path, const char* key,
                  double fallback) {
  const json* v = find_key(j, path, key);
  if (!v) return fallback;
  if (!v->is_number()) {
    throw ValidationError(join(path, key), "expected number");
  }
  return v->get<double>();
}

bool opt_bool(const json& j, const std::string& path, const char* key,
              bool fallback) {
  const json* v = find_key(j, path, key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    throw ValidationError(join(path, key), "expected boolean");
  }
  return v->get<bool>();
}

const json* opt_array(const json& j, const std::string& path, const char* key) {
  const json* v = find_key(j, path, key);
  if (!v) return nullptr;
  if (!v->is_array()) throw ValidationError(join(path, key), "expected array");
  return v;
}

std::map<Rat, std::int64_t> radio_from_json(const json& j,
                                            const std::string& path) {
  std::map<Rat, std::int64_t> out;
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    Rat rat;
    try {
      rat = rat_from_name(key);
    } catch (const ValidationError&) {
      throw ValidationError(join(path, key), "unknown RAT key");
    }
    out[rat] = nonneg_int(value, join(path, key));
  }
  return out;
}

json radio_to_json(const std::map<Rat, std::int64_t>& radio) {
  json out = json::object();
  for (const auto& [rat, units] : radio) {
    if (units != 0) out[rat_name(rat)] = units;
  }
  return out;
}

}  // namespace

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFoundError("cannot open file: " + file);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + file);
  out << content;
}

json rv_to_json(const ResourceVector& rv) {
  json out = json::object();
  out["cpu_millicores"] = rv.cpu_millicores;
  out["memory_mb"] = rv.memory_mb;
  out["storage_mb"] = rv.storage_mb;
  out["bandwidth_mbps"] = rv.bandwidth_mbps;
  json radio = radio_to_json(rv.radio_units);
  if (!radio.empty()) out["radio_units"] = radio;
  return out;
}

ResourceVector rv_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  ResourceVector rv;
  rv.cpu_millicores = opt_nonneg(j, path, "cpu_millicores", 0);
  rv.memory_mb = opt_nonneg(j, path, "memory_mb", 0);
  rv.storage_mb = opt_nonneg(j, path, "storage_mb", 0);
  rv.bandwidth_mbps = opt_nonneg(j, path, "bandwidth_mbps", 0);
  if (const json* radio = find_key(j, path, "radio_units")) {
    rv.radio_units = radio_from_json(*radio, join(path, "radio_units"));
  }
  return rv;
}

json sfi_rule_to_json(const SFIRule& rule) {
  json out = json::object();
  out["direction"] = flow_direction_name(rule.direction);
  out["stream_id"] = rule.stream_id;
  json t = json::object();
  switch (rule.transform.kind) {
    case TransformKind::PASS:
      t["kind"] = "PASS";
      break;
    case TransformKind::REDACT:
      t["kind"] = "REDACT";
      t["fields"] = rule.transform.redact_fields;
      break;
    case TransformKind::AGGREGATE:
      t["kind"] = "AGGREGATE";
      t["window"] = rule.transform.window;
      t["function"] = aggregate_fn_name(rule.transform.function);
      break;
  }
  out["transform"] = t;
  return out;
}

SFIRule sfi_rule_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  SFIRule rule;
  std::string dir = opt_string(j, path, "direction", "OUTBOUND");
  try {
    rule.direction = flow_direction_from_name(dir);
  } catch (const ValidationError&) {
    throw ValidationError(join(path, "direction"), "unknown direction " + dir);
  }
  rule.stream_id = req_string(j, path, "stream_id");
  if (const json* t = find_key(j, path, "transform")) {
    std::string tpath = join(path, "transform");
    std::string kind = opt_string(*t, tpath, "kind", "PASS");
    if (kind == "PASS") {
      rule.transform.kind = TransformKind::PASS;
    } else if (kind == "REDACT") {
      rule.transform.kind = TransformKind::REDACT;
      const json* fields = opt_array(*t, tpath, "fields");
      if (!fields || fields->empty()) {
        throw ValidationError(join(tpath, "fields"),
                              "REDACT requires a non-empty field list");
      }
      for (std::size_t i = 0; i < fields->size(); ++i) {
        const json& f = (*fields)[i];
        if (!f.is_string()) {
          throw ValidationError(idx(join(tpath, "fields"), i),
                                "expected string");
        }
        rule.transform.redact_fields.push_back(f.get<std::string>());
      }
    } else if (kind == "AGGREGATE") {
      rule.transform.kind = TransformKind::AGGREGATE;
      std::int64_t window = opt_nonneg(*t, tpath, "window", 0);
      if (window <= 0) {
        throw ValidationError(join(tpath, "window"), "must be > 0");
      }
      rule.transform.window = static_cast<int>(window);
      std::string fn = opt_string(*t, tpath, "function", "MEAN");
      try {
        rule.transform.function = aggregate_fn_from_name(fn);
      } catch (const ValidationError&) {
        throw ValidationError(join(tpath, "function"),
                              "unknown aggregate function " + fn);
      }
    } else {
      throw ValidationError(join(tpath, "kind"),
                            "unknown transform kind " + kind);
    }
  }
  return rule;
}

std::vector<SFIRule> sfi_rules_from_json(const json& j,
                                         const std::string& path) {
  if (!j.is_array()) throw ValidationError(path, "expected array");
  std::vector<SFIRule> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(sfi_rule_from_json(j[i], idx(path, i)));
  }
  return out;
}

json blueprint_to_json(const SliceBlueprint& bp) {
  json out = json::object();
  out["id"] = bp.id;
  out["tenant_id"] = bp.tenant_id;
  json vfs = json::array();
  for (const auto& vf : bp.vfs) {
    json v = json::object();
    v["name"] = vf.name;
    v["kind"] = vf_kind_name(vf.kind);
    v["demand"] = rv_to_json(vf.demand);
    if (vf.site_affinity) v["site_affinity"] = *vf.site_affinity;
    if (vf.equipment_binding) v["equipment_binding"] = *vf.equipment_binding;
    vfs.push_back(v);
  }
  out["vfs"] = vfs;
  json vlinks = json::array();
  for (const auto& vl : bp.vlinks) {
    json v = json::object();
    v["endpoint_a"] = vl.endpoint_a;
    v["endpoint_b"] = vl.endpoint_b;
    v["bandwidth_mbps"] = vl.bandwidth_mbps;
    v["max_latency_ms"] = vl.max_latency_ms;
    vlinks.push_back(v);
  }
  out["vlinks"] = vlinks;
  json streams = json::array();
  for (const auto& st : bp.streams) {
    json v = json::object();
    v["id"] = st.id;
    v["producer"] = st.producer;
    v["sensitivity"] = sensitivity_name(st.sensitivity);
    streams.push_back(v);
  }
  out["streams"] = streams;
  if (!bp.federations.empty()) {
    json feds = json::array();
    for (const auto& fp : bp.federations) {
      json v = json::object();
      v["exporter_slice_id"] = fp.exporter_slice_id;
      json rules = json::array();
      for (const auto& rule : fp.rules) rules.push_back(sfi_rule_to_json(rule));
      v["rules"] = rules;
      feds.push_back(v);
    }
    out["federations"] = feds;
  }
  return out;
}

SliceBlueprint blueprint_from_json(const json& j) {
  const std::string root;
  SliceBlueprint bp;
  bp.id = req_string(j, root, "id");
  bp.tenant_id = req_string(j, root, "tenant_id");
  if (const json* vfs = opt_array(j, root, "vfs")) {
    for (std::size_t i = 0; i < vfs->size(); ++i) {
      const json& v = (*vfs)[i];
      std::string path = idx("/vfs", i);
      VFSpec vf;
      vf.name = req_string(v, path, "name");
      std::string kind = opt_string(v, path, "kind", "VNF");
      try {
        vf.kind = vf_kind_from_name(kind);
      } catch (const ValidationError&) {
        throw ValidationError(join(path, "kind"), "unknown VF kind " + kind);
      }
      if (const json* d = find_key(v, path, "demand")) {
        vf.demand = rv_from_json(*d, join(path, "demand"));
      }
      if (find_key(v, path, "site_affinity")) {
        vf.site_affinity = req_string(v, path, "site_affinity");
      }
      if (find_key(v, path, "equipment_binding")) {
        vf.equipment_binding = req_string(v, path, "equipment_binding");
      }
      bp.vfs.push_back(std::move(vf));
    }
  }
  if (const json* vlinks = opt_array(j, root, "vlinks")) {
    for (std::size_t i = 0; i < vlinks->size(); ++i) {
      const json& v = (*vlinks)[i];
      std::string path = idx("/vlinks", i);
      VLinkSpec vl;
      vl.endpoint_a = req_string(v, path, "endpoint_a");
      vl.endpoint_b = req_string(v, path, "endpoint_b");
      vl.bandwidth_mbps = opt_nonneg(v, path, "bandwidth_mbps", 0);
      vl.max_latency_ms = req_number(v, path, "max_latency_ms");
      if (vl.max_latency_ms <= 0) {
        throw ValidationError(join(path, "max_latency_ms"), "must be > 0");
      }
      bp.vlinks.push_back(std::move(vl));
    }
  }
  if (const json* streams = opt_array(j, root, "streams")) {
    for (std::size_t i = 0; i < streams->size(); ++i) {
      const json& v = (*streams)[i];
      std::string path = idx("/streams", i);
      StreamSpec st;
      st.id = req_string(v, path, "id");
      st.producer = req_string(v, path, "producer");
      std::string sens = opt_string(v, path, "sensitivity", "PUBLIC");
      try {
        st.sensitivity = sensitivity_from_name(sens);
      } catch (const ValidationError&) {
        throw ValidationError(join(path, "sensitivity"),
                              "unknown sensitivity " + sens);
      }
      bp.streams.push_back(std::move(st));
    }
  }
  if (const json* feds = opt_array(j, root, "federations")) {
    for (std::size_t i = 0; i < feds->size(); ++i) {
      const json& v = (*feds)[i];
      std::string path = idx("/federations", i);
      FederationProposal fp;
      fp.exporter_slice_id = req_string(v, path, "exporter_slice_id");
      if (const json* rules = opt_array(v, path, "rules")) {
        fp.rules = sfi_rules_from_json(*rules, join(path, "rules"));
      }
      bp.federations.push_back(std::move(fp));
    }
  }
  return bp;
}

SliceBlueprint parse_blueprint_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("/", std::string("JSON syntax error: ") + e.what());
  }
  return blueprint_from_json(j);
}

SliceBlueprint parse_blueprint_file(const std::string& file) {
  return parse_blueprint_text(read_file(file));
}

std::string blueprint_to_canonical_text(const SliceBlueprint& bp) {
  return blueprint_to_json(bp).dump(2) + "\n";
}

json inventory_to_json(const Inventory& inv) {
  json out = json::object();
  json tenants = json::array();
  for (const auto& t : inv.tenants) {
    tenants.push_back({{"id", t.id}, {"role", tenant_role_name(t.role)}});
  }
  out["tenants"] = tenants;
  json sites = json::array();
  for (const auto& s : inv.sites) {
    json v = json::object();
    v["id"] = s.id;
    v["owner"] = s.owner;
    v["intra_site_latency_ms"] = s.intra_site_latency_ms;
    v["local_core"] = s.local_core;
    json radio = radio_to_json(s.radio_capacity);
    if (!radio.empty()) v["radio_capacity"] = radio;
    if (!s.nodes.empty()) v["nodes"] = s.nodes;
    json wan = json::array();
    for (const auto& wl : s.wan_links) {
      wan.push_back({{"peer_site", wl.peer_site},
                     {"latency_ms", wl.latency_ms},
                     {"bandwidth_mbps", wl.bandwidth_mbps}});
    }
    if (!wan.empty()) v["wan_links"] = wan;
    sites.push_back(v);
  }
  out["sites"] = sites;
  json nodes = json::array();
  for (const auto& n : inv.nodes) {
    json v = json::object();
    v["id"] = n.id;
    v["site_id"] = n.site_id;
    v["capacity"] = rv_to_json(n.capacity);
    v["max_instances"] = n.max_instances;
    nodes.push_back(v);
  }
  out["nodes"] = nodes;
  json equipment = json::array();
  for (const auto& e : inv.equipment) {
    json v = json::object();
    v["id"] = e.id;
    v["site_id"] = e.site_id;
    v["kind"] = equipment_kind_name(e.kind);
    v["max_vcontrollers"] = e.max_vcontrollers;
    equipment.push_back(v);
  }
  out["equipment"] = equipment;
  return out;
}

Inventory inventory_from_json(const json& j) {
  const std::string root;
  Inventory inv;
  if (const json* tenants = opt_array(j, root, "tenants")) {
    for (std::size_t i = 0; i < tenants->size(); ++i) {
      const json& v = (*tenants)[i];
      std::string path = idx("/tenants", i);
      Tenant t;
      t.id = req_string(v, path, "id");
      std::string role = opt_string(v, path, "role", "PRODUCT_OWNER");
      try {
        t.role = tenant_role_from_name(role);
      } catch (const ValidationError&) {
        throw ValidationError(join(path, "role"), "unknown role " + role);
      }
      inv.tenants.push_back(std::move(t));
    }
  }
  if (const json* sites = opt_array(j, root, "sites")) {
    for (std::size_t i = 0; i < sites->size(); ++i) {
      const json& v = (*sites)[i];
      std::string path = idx("/sites", i);
      Site s;
      s.id = req_string(v, path, "id");
      s.owner = req_string(v, path, "owner");
      s.intra_site_latency_ms = opt_number(v, path, "intra_site_latency_ms", 0);
      if (s.intra_site_latency_ms < 0) {
        throw ValidationError(join(path, "intra_site_latency_ms"),
                              "must be >= 0");
      }
      s.local_core = opt_bool(v, path, "local_core", false);
      if (const json* radio = find_key(v, path, "radio_capacity")) {
        s.radio_capacity =
            radio_from_json(*radio, join(path, "radio_capacity"));
      }
      if (const json* node_list = opt_array(v, path, "nodes")) {
        for (const auto& nid : *node_list) {
          if (!nid.is_string()) {
            throw ValidationError(join(path, "nodes"), "expected string ids");
          }
          s.nodes.push_back(nid.get<std::string>());
        }
      }
      if (const json* wan = opt_array(v, path, "wan_links")) {
        for (std::size_t w = 0; w < wan->size(); ++w) {
          const json& wv = (*wan)[w];
          std::string wpath = idx(join(path, "wan_links"), w);
          WanLink wl;
          wl.peer_site = req_string(wv, wpath, "peer_site");
          wl.latency_ms = req_number(wv, wpath, "latency_ms");
          if (wl.latency_ms < 0) {
            throw ValidationError(join(wpath, "latency_ms"), "must be >= 0");
          }
          wl.bandwidth_mbps = opt_nonneg(wv, wpath, "bandwidth_mbps", 0);
          s.wan_links.push_back(std::move(wl));
        }
      }
      inv.sites.push_back(std::move(s));
    }
  }
  if (const json* nodes = opt_array(j, root, "nodes")) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const json& v = (*nodes)[i];
      std::string path = idx("/nodes", i);
      EdgeNode n;
      n.id = req_string(v, path, "id");
      n.site_id = req_string(v, path, "site_id");
      if (const json* cap = find_key(v, path, "capacity")) {
        n.capacity = rv_from_json(*cap, join(path, "capacity"));
      }
      std::int64_t max_inst = opt_nonneg(v, path, "max_instances", 80);
      if (max_inst <= 0) {
        throw ValidationError(join(path, "max_instances"), "must be > 0");
      }
      n.max_instances = static_cast<int>(max_inst);
      inv.nodes.push_back(std::move(n));
    }
  }
  if (const json* equipment = opt_array(j, root, "equipment")) {
    for (std::size_t i = 0; i < equipment->size(); ++i) {
      const json& v = (*equipment)[i];
      std::string path = idx("/equipment", i);
      Equipment e;
      e.id = req_string(v, path, "id");
      e.site_id = req_string(v, path, "site_id");
      std::string kind = opt_string(v, path, "kind", "SENSOR");
      try {
        e.kind = equipment_kind_from_name(kind);
      } catch (const ValidationError&) {
        throw ValidationError(join(path, "kind"), "unknown kind " + kind);
      }
      std::int64_t max_vc = opt_nonneg(v, path, "max_vcontrollers", 1);
      if (max_vc <= 0) {
        throw ValidationError(join(path, "max_vcontrollers"), "must be > 0");
      }
      e.max_vcontrollers = static_cast<int>(max_vc);
      inv.equipment.push_back(std::move(e));
    }
  }
  // Derive per-site node lists when omitted.
  for (auto& site : inv.sites) {
    if (!site.nodes.empty()) continue;
    for (const auto& n : inv.nodes) {
      if (n.site_id == site.id) site.nodes.push_back(n.id);
    }
  }
  return inv;
}

Inventory parse_inventory_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("/", std::string("JSON syntax error: ") + e.what());
  }
  return inventory_from_json(j);
}

Inventory parse_inventory_file(const std::string& file) {
  return parse_inventory_text(read_file(file));
}

json plan_to_json(const PlacementPlan& plan) {
  json out = json::object();
  out["assignments"] = plan.assignments;
  out["vcontroller_allocs"] = plan.vcontroller_allocs;
  json routes = json::object();
  for (const auto& [index, route] : plan.link_routes) {
    json hops = json::array();
    for (const auto& hop : route.wan_hops) {
      hops.push_back({{"site_a", hop.site_a}, {"site_b", hop.site_b}});
    }
    routes[std::to_string(index)] = {{"latency_ms", route.latency_ms},
                                     {"bandwidth_mbps", route.bandwidth_mbps},
                                     {"wan_hops", hops}};
  }
  out["link_routes"] = routes;
  return out;
}

PlacementPlan plan_from_json(const json& j) {
  PlacementPlan plan;
  if (j.contains("assignments")) {
    for (const auto& [vf, node] : j["assignments"].items()) {
      plan.assignments[vf] = node.get<std::string>();
    }
  }
  if (j.contains("vcontroller_allocs")) {
    for (const auto& [eq, vc] : j["vcontroller_allocs"].items()) {
      plan.vcontroller_allocs[eq] = vc.get<std::string>();
    }
  }
  if (j.contains("link_routes")) {
    for (const auto& [key, value] : j["link_routes"].items()) {
      LinkRoute route;
      route.latency_ms = value["latency_ms"].get<double>();
      route.bandwidth_mbps = value["bandwidth_mbps"].get<std::int64_t>();
      for (const auto& hop : value["wan_hops"]) {
        route.wan_hops.push_back({hop["site_a"].get<std::string>(),
                                  hop["site_b"].get<std::string>()});
      }
      plan.link_routes[std::stoi(key)] = std::move(route);
    }
  }
  return plan;
}

json delta_to_json(const ReconfigureDelta& delta) {
  json bp = json::object();
  SliceBlueprint tmp;
  tmp.vfs = delta.add_vfs;
  tmp.vlinks = delta.updated_vlinks;
  json full = blueprint_to_json(tmp);
  json out = json::object();
  out["add_vfs"] = full["vfs"];
  out["remove_vfs"] = delta.remove_vfs;
  out["updated_vlinks"] = full["vlinks"];
  return out;
}

ReconfigureDelta delta_from_json(const json& j) {
  const std::string root;
  ReconfigureDelta delta;
  json as_bp = json::object();
  as_bp["id"] = "delta";
  as_bp["tenant_id"] = "delta";
  if (const json* adds = opt_array(j, root, "add_vfs")) as_bp["vfs"] = *adds;
  if (const json* links = opt_array(j, root, "updated_vlinks")) {
    as_bp["vlinks"] = *links;
  }
  SliceBlueprint tmp = blueprint_from_json(as_bp);
  delta.add_vfs = std::move(tmp.vfs);
  delta.updated_vlinks = std::move(tmp.vlinks);
  if (const json* removes = opt_array(j, root, "remove_vfs")) {
    for (std::size_t i = 0; i < removes->size(); ++i) {
      const json& v = (*removes)[i];
      if (!v.is_string()) {
        throw ValidationError(idx("/remove_vfs", i), "expected string");
      }
      delta.remove_vfs.push_back(v.get<std::string>());
    }
  }
  return delta;
}

json record_to_json(const DataRecord& record) {
  json out = json::object();
  out["stream_id"] = record.stream_id;
  out["slice_id"] = record.slice_id;
  out["timestamp"] = record.timestamp;
  out["sequence"] = record.sequence;
  out["sensitivity"] = sensitivity_name(record.sensitivity);
  json fields = json::object();
  for (const auto& [name, value] : record.fields) {
    if (std::holds_alternative<double>(value)) {
      fields[name] = std::get<double>(value);
    } else {
      fields[name] = std::get<std::string>(value);
    }
  }
  out["fields"] = fields;
  return out;
}

DataRecord record_from_json(const json& j, const std::string& path) {
  DataRecord record;
  record.stream_id = req_string(j, path, "stream_id");
  record.slice_id = opt_string(j, path, "slice_id", "");
  record.timestamp = static_cast<LogicalTime>(opt_nonneg(j, path, "timestamp", 0));
  record.sequence =
      static_cast<std::uint64_t>(opt_nonneg(j, path, "sequence", 0));
  std::string sens = opt_string(j, path, "sensitivity", "PUBLIC");
  try {
    record.sensitivity = sensitivity_from_name(sens);
  } catch (const ValidationError&) {
    throw ValidationError(join(path, "sensitivity"),
                          "unknown sensitivity " + sens);
  }
  if (const json* fields = find_key(j, path, "fields")) {
    if (!fields->is_object()) {
      throw ValidationError(join(path, "fields"), "expected an object");
    }
    for (const auto& [name, value] : fields->items()) {
      if (value.is_number()) {
        record.fields[name] = value.get<double>();
      } else if (value.is_string()) {
        record.fields[name] = value.get<std::string>();
      } else {
        throw ValidationError(join(join(path, "fields"), name),
                              "expected number or string");
      }
    }
  }
  return record;
}

json params_to_json(const LatencyModelParams& params) {
  json out = json::object();
  out["empty"] = {{"alpha_s", params.empty.alpha_s},
                  {"beta_s_per_instance", params.empty.beta_s_per_instance}};
  out["with_vf"] = {
      {"alpha_s", params.with_vf.alpha_s},
      {"beta_s_per_instance", params.with_vf.beta_s_per_instance}};
  out["noise_sigma_s"] = params.noise_sigma_s;
  out["seed"] = params.seed;
  return out;
}

LatencyModelParams params_from_json(const json& j, const std::string& path) {
  LatencyModelParams params = default_params();
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  for (const char* mode : {"empty", "with_vf"}) {
    if (const json* m = find_key(j, path, mode)) {
      std::string mpath = join(path, mode);
      ModeParams& mp =
          std::string(mode) == "empty" ? params.empty : params.with_vf;
      mp.alpha_s = opt_number(*m, mpath, "alpha_s", mp.alpha_s);
      mp.beta_s_per_instance =
          opt_number(*m, mpath, "beta_s_per_instance", mp.beta_s_per_instance);
      if (mp.alpha_s < 0) {
        throw ValidationError(join(mpath, "alpha_s"), "must be >= 0");
      }
    }
  }
  params.noise_sigma_s = opt_number(j, path, "noise_sigma_s", 0);
  if (params.noise_sigma_s < 0) {
    throw ValidationError(join(path, "noise_sigma_s"), "must be >= 0");
  }
  params.seed =
      static_cast<std::uint64_t>(opt_nonneg(j, path, "seed", 1));
  if (params.with_vf.beta_s_per_instance <= 0) {
    throw ValidationError(join(path, "with_vf"),
                          "beta_s_per_instance must be > 0");
  }
  return params;
}

json instance_to_json(const VFInstance& inst) {
  json out = json::object();
  out["id"] = inst.id;
  out["node_id"] = inst.node_id;
  out["slice_id"] = inst.slice_id;
  out["vf_name"] = inst.vf_name;
  out["mode"] = spawn_mode_name(inst.mode);
  out["demand"] = rv_to_json(inst.demand);
  return out;
}

VFInstance instance_from_json(const json& j, const std::string& path) {
  VFInstance inst;
  inst.id = req_string(j, path, "id");
  inst.node_id = req_string(j, path, "node_id");
  inst.slice_id = opt_string(j, path, "slice_id", "");
  inst.vf_name = opt_string(j, path, "vf_name", "");
  inst.mode = spawn_mode_from_name(opt_string(j, path, "mode", "vf"));
  if (const json* d = find_key(j, path, "demand")) {
    inst.demand = rv_from_json(*d, join(path, "demand"));
  }
  return inst;
}

}  // namespace slicenet
