#include "slicenet/resources.hpp"

#include <sstream>

namespace slicenet {

const char* rat_name(Rat rat) {
  switch (rat) {
    case Rat::NB_IOT: return "NB_IOT";
    case Rat::URLLC: return "URLLC";
    case Rat::EMBB: return "EMBB";
  }
  return "?";
}

Rat rat_from_name(const std::string& name) {
  if (name == "NB_IOT") return Rat::NB_IOT;
  if (name == "URLLC") return Rat::URLLC;
  if (name == "EMBB") return Rat::EMBB;
  throw ValidationError(name, "unknown RAT (expected NB_IOT, URLLC or EMBB)");
}

bool ResourceVector::well_formed() const {
  if (cpu_millicores < 0 || memory_mb < 0 || storage_mb < 0 ||
      bandwidth_mbps < 0) {
    return false;
  }
  for (const auto& [rat, units] : radio_units) {
    if (units < 0) return false;
  }
  return true;
}

bool ResourceVector::is_zero() const {
  if (cpu_millicores != 0 || memory_mb != 0 || storage_mb != 0 ||
      bandwidth_mbps != 0) {
    return false;
  }
  for (const auto& [rat, units] : radio_units) {
    if (units != 0) return false;
  }
  return true;
}

std::int64_t ResourceVector::radio(Rat rat) const {
  auto it = radio_units.find(rat);
  return it == radio_units.end() ? 0 : it->second;
}

ResourceVector ResourceVector::compute_only() const {
  ResourceVector out = *this;
  out.radio_units.clear();
  return out;
}

bool rv_fits(const ResourceVector& demand, const ResourceVector& available) {
  if (demand.cpu_millicores > available.cpu_millicores) return false;
  if (demand.memory_mb > available.memory_mb) return false;
  if (demand.storage_mb > available.storage_mb) return false;
  if (demand.bandwidth_mbps > available.bandwidth_mbps) return false;
  for (const auto& [rat, units] : demand.radio_units) {
    if (units > available.radio(rat)) return false;
  }
  return true;
}

ResourceVector rv_add(const ResourceVector& a, const ResourceVector& b) {
  ResourceVector out = a;
  out.cpu_millicores += b.cpu_millicores;
  out.memory_mb += b.memory_mb;
  out.storage_mb += b.storage_mb;
  out.bandwidth_mbps += b.bandwidth_mbps;
  for (const auto& [rat, units] : b.radio_units) {
    out.radio_units[rat] += units;
  }
  return out;
}

ResourceVector rv_sub(const ResourceVector& a, const ResourceVector& b) {
  ResourceVector out = a;
  out.cpu_millicores -= b.cpu_millicores;
  out.memory_mb -= b.memory_mb;
  out.storage_mb -= b.storage_mb;
  out.bandwidth_mbps -= b.bandwidth_mbps;
  for (const auto& [rat, units] : b.radio_units) {
    out.radio_units[rat] = out.radio(rat) - units;
  }
  if (!out.well_formed()) {
    throw UnderflowError("rv_sub underflow: " + rv_to_string(a) + " - " +
                         rv_to_string(b));
  }
  return out;
}

std::int64_t scalar_demand(const ResourceVector& rv) {
  return rv.cpu_millicores + rv.memory_mb / 4 + rv.bandwidth_mbps;
}

std::string rv_to_string(const ResourceVector& rv) {
  std::ostringstream os;
  os << "{cpu:" << rv.cpu_millicores << ",mem:" << rv.memory_mb
     << ",sto:" << rv.storage_mb << ",bw:" << rv.bandwidth_mbps;
  for (const auto& [rat, units] : rv.radio_units) {
    os << "," << rat_name(rat) << ":" << units;
  }
  os << "}";
  return os.str();
}

}  // namespace slicenet
