#ifndef SLICENET_RESOURCES_HPP_
#define SLICENET_RESOURCES_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "slicenet/errors.hpp"

namespace slicenet {

// Radio access technologies sliced at site granularity.
enum class Rat { NB_IOT, URLLC, EMBB };

const char* rat_name(Rat rat);
Rat rat_from_name(const std::string& name);

// Multi-dimensional capacity/demand. Missing RAT keys mean zero units.
// All components are non-negative integers so residual accounting stays
// exact under add/sub round trips.
struct ResourceVector {
  std::int64_t cpu_millicores = 0;
  std::int64_t memory_mb = 0;
  std::int64_t storage_mb = 0;
  std::int64_t bandwidth_mbps = 0;
  std::map<Rat, std::int64_t> radio_units;

  bool well_formed() const;
  bool is_zero() const;
  std::int64_t radio(Rat rat) const;

  // Copy with the radio map cleared. Node-level fit checks use this;
  // radio units are accounted per site, not per node.
  ResourceVector compute_only() const;

  bool operator==(const ResourceVector& other) const = default;
};

// true iff demand <= available in every component including every RAT key.
bool rv_fits(const ResourceVector& demand, const ResourceVector& available);

// Componentwise sum; RAT maps merged by key.
ResourceVector rv_add(const ResourceVector& a, const ResourceVector& b);

// Componentwise difference. Throws UnderflowError if any component of the
// result would be negative.
ResourceVector rv_sub(const ResourceVector& a, const ResourceVector& b);

// Fixed scalarization used for heuristic ordering:
//   cpu_millicores + memory_mb/4 + bandwidth_mbps  (integer division).
// Any fixed positive weighting works; this one is pinned for determinism.
std::int64_t scalar_demand(const ResourceVector& rv);

std::string rv_to_string(const ResourceVector& rv);

}  // namespace slicenet

#endif  // SLICENET_RESOURCES_HPP_
