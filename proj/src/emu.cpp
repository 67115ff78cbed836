#include "slicenet/emu.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "slicenet/errors.hpp"

namespace slicenet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64: cheap, well-mixed stream seeding and stepping.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

const char* spawn_mode_name(SpawnMode mode) {
  return mode == SpawnMode::EMPTY ? "empty" : "vf";
}

SpawnMode spawn_mode_from_name(const std::string& name) {
  if (name == "empty" || name == "EMPTY") return SpawnMode::EMPTY;
  if (name == "vf" || name == "with_vf" || name == "WITH_VF") {
    return SpawnMode::WITH_VF;
  }
  throw ValidationError(name, "unknown spawn mode (expected empty or vf)");
}

LatencyModelParams default_params() {
  LatencyModelParams p;
  p.empty.alpha_s = 0.5;
  p.empty.beta_s_per_instance = (4.1 - 0.5) / 60.0;
  p.with_vf.alpha_s = 0.5;
  p.with_vf.beta_s_per_instance = (8.2 - 0.5) / 60.0;
  p.noise_sigma_s = 0;
  p.seed = 1;
  return p;
}

ResourceVector NodeRuntime::used() const {
  ResourceVector total;
  for (const auto& inst : instances) {
    total = rv_add(total, inst.demand);
  }
  return total;
}

Emulator::Emulator(const std::vector<EdgeNode>& nodes,
                   LatencyModelParams params, bool realtime)
    : params_(params), realtime_(realtime) {
  for (const auto& n : nodes) {
    nodes_[n.id] = NodeRuntime{n, {}};
    rng_state_[n.id] = params_.seed ^ fnv1a(n.id);
  }
}

NodeRuntime& Emulator::node_mut(const std::string& node_id) {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) {
    throw NotFoundError("unknown node: " + node_id);
  }
  return it->second;
}

const NodeRuntime& Emulator::node(const std::string& node_id) const {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) {
    throw NotFoundError("unknown node: " + node_id);
  }
  return it->second;
}

std::vector<std::string> Emulator::node_ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [id, n] : nodes_) out.push_back(id);
  return out;
}

double Emulator::gaussian_noise(const std::string& node_id) {
  // Box-Muller, hand-rolled so streams are bit-stable across libraries.
  std::uint64_t& state = rng_state_.at(node_id);
  double u1 = uniform01(state);
  double u2 = uniform01(state);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

SpawnResult Emulator::spawn_batch(const std::string& node_id,
                                  const std::vector<SpawnSpec>& specs,
                                  SpawnMode mode) {
  NodeRuntime& rt = node_mut(node_id);
  SpawnResult result;
  if (specs.empty()) return result;

  int count = static_cast<int>(specs.size());
  if (rt.count() + count > rt.node.max_instances) {
    throw CapacityError("node " + node_id + ": instance cap " +
                        std::to_string(rt.node.max_instances) + " exceeded");
  }
  // Radio units are pooled per site; node capacity covers compute only.
  ResourceVector after = rt.used().compute_only();
  for (const auto& spec : specs) {
    after = rv_add(after, spec.demand.compute_only());
  }
  if (!rv_fits(after, rt.node.capacity)) {
    throw CapacityError("node " + node_id + ": capacity exceeded, want " +
                        rv_to_string(after) + " of " +
                        rv_to_string(rt.node.capacity));
  }

  for (const auto& spec : specs) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "vi-%06llu",
                  static_cast<unsigned long long>(next_instance_++));
    VFInstance inst{buf,         node_id, spec.slice_id,
                    spec.vf_name, mode,    spec.demand};
    result.instance_ids.push_back(inst.id);
    rt.instances.push_back(std::move(inst));
  }

  const ModeParams& mp = params_.mode(mode);
  double elapsed = mp.alpha_s + mp.beta_s_per_instance * rt.count();
  if (params_.noise_sigma_s > 0) {
    elapsed += params_.noise_sigma_s * gaussian_noise(node_id);
  }
  result.elapsed_s = std::max(0.0, elapsed);
  return result;
}

void Emulator::sleep_for(double seconds) const {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

ResourceVector Emulator::teardown(const std::string& node_id,
                                  const std::vector<std::string>& ids) {
  NodeRuntime& rt = node_mut(node_id);
  // Validate first: no partial teardown on unknown ids.
  for (const auto& id : ids) {
    bool found = std::any_of(rt.instances.begin(), rt.instances.end(),
                             [&](const VFInstance& i) { return i.id == id; });
    if (!found) {
      throw NotFoundError("node " + node_id + ": unknown instance " + id);
    }
  }
  ResourceVector released;
  for (const auto& id : ids) {
    auto it = std::find_if(rt.instances.begin(), rt.instances.end(),
                           [&](const VFInstance& i) { return i.id == id; });
    released = rv_add(released, it->demand);
    rt.instances.erase(it);
  }
  return released;
}

void Emulator::restore_instances(const std::string& node_id,
                                 std::vector<VFInstance> instances) {
  NodeRuntime& rt = node_mut(node_id);
  rt.instances = std::move(instances);
  for (const auto& inst : rt.instances) {
    // Keep the id counter ahead of anything restored.
    if (inst.id.size() > 3 && inst.id.rfind("vi-", 0) == 0) {
      std::uint64_t n = std::strtoull(inst.id.c_str() + 3, nullptr, 10);
      if (n >= next_instance_) next_instance_ = n + 1;
    }
  }
}

}  // namespace slicenet
