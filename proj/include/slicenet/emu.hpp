#ifndef SLICENET_EMU_HPP_
#define SLICENET_EMU_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slicenet/model.hpp"
#include "slicenet/resources.hpp"

namespace slicenet {

enum class SpawnMode { EMPTY, WITH_VF };

const char* spawn_mode_name(SpawnMode mode);
SpawnMode spawn_mode_from_name(const std::string& name);

struct ModeParams {
  double alpha_s = 0;              // base batch cost
  double beta_s_per_instance = 0;  // marginal cost per running instance
};

// Calibrated instantiation-time model. Spawn time for a non-empty batch is
//   alpha_s(mode) + beta_s_per_instance(mode) * k_after + N(0, noise_sigma_s)
// clamped at >= 0, where k_after counts the node's running instances after
// the batch. Deterministic given the seed.
struct LatencyModelParams {
  ModeParams empty;
  ModeParams with_vf;
  double noise_sigma_s = 0;
  std::uint64_t seed = 1;

  const ModeParams& mode(SpawnMode m) const {
    return m == SpawnMode::EMPTY ? empty : with_vf;
  }
};

// Default calibration: 60 running instances with VFs cost 8.2 s, 60 empty
// ones 4.1 s, with a 0.5 s base batch cost.
LatencyModelParams default_params();

struct VFInstance {
  std::string id;
  std::string node_id;
  std::string slice_id;
  std::string vf_name;
  SpawnMode mode = SpawnMode::WITH_VF;
  ResourceVector demand;
};

struct SpawnSpec {
  std::string slice_id;
  std::string vf_name;
  ResourceVector demand;
};

struct SpawnResult {
  double elapsed_s = 0;
  std::vector<std::string> instance_ids;
};

struct NodeRuntime {
  EdgeNode node;
  std::vector<VFInstance> instances;

  ResourceVector used() const;
  int count() const { return static_cast<int>(instances.size()); }
};

// Deterministic node-agent emulator. Advances a virtual clock instead of
// sleeping; under the realtime flag the joining caller sleeps for the
// composed duration (demo only). Each node draws noise from its own
// seed-derived stream so results do not depend on the order agents run in.
class Emulator {
 public:
  Emulator() = default;
  Emulator(const std::vector<EdgeNode>& nodes, LatencyModelParams params,
           bool realtime = false);

  // Creates specs.size() instances on the node, all or nothing.
  // Throws CapacityError if the instance cap or any capacity component
  // would be exceeded; throws NotFoundError for an unknown node.
  SpawnResult spawn_batch(const std::string& node_id,
                          const std::vector<SpawnSpec>& specs, SpawnMode mode);

  // Removes the given instances and returns the released demand total.
  // Unknown instance ids leave the node unchanged (NotFoundError).
  ResourceVector teardown(const std::string& node_id,
                          const std::vector<std::string>& instance_ids);

  const NodeRuntime& node(const std::string& node_id) const;
  std::vector<std::string> node_ids() const;

  const LatencyModelParams& params() const { return params_; }
  void set_params(const LatencyModelParams& p) { params_ = p; }

  double now_s() const { return clock_s_; }
  void advance_clock(double seconds) { clock_s_ += seconds; }
  bool realtime() const { return realtime_; }
  void sleep_for(double seconds) const;  // wall-clock, realtime demos only

  // Restores instance state from a snapshot (import path).
  void restore_instances(const std::string& node_id,
                         std::vector<VFInstance> instances);

 private:
  NodeRuntime& node_mut(const std::string& node_id);
  double gaussian_noise(const std::string& node_id);

  std::map<std::string, NodeRuntime> nodes_;
  std::map<std::string, std::uint64_t> rng_state_;  // per-node stream
  LatencyModelParams params_ = default_params();
  bool realtime_ = false;
  double clock_s_ = 0;
  std::uint64_t next_instance_ = 1;
};

}  // namespace slicenet

#endif  // SLICENET_EMU_HPP_
