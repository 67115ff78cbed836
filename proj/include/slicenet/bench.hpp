#ifndef SLICENET_BENCH_HPP_
#define SLICENET_BENCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "slicenet/orchestrator.hpp"

namespace slicenet {

// One measurement row of the instantiation-latency experiment.
struct BenchSample {
  int round = 0;
  int running_after = 0;  // instances per node after the round
  SpawnMode mode = SpawnMode::WITH_VF;
  double response_time_s = 0;
};

struct BenchConfig {
  int nodes = 9;
  int per_round = 10;
  int rounds = 8;
  SpawnMode mode = SpawnMode::WITH_VF;
  LatencyModelParams params = default_params();
  std::uint64_t seed = 1;
  double orchestration_overhead_s = 0.2;
  int max_instances = 80;
};

struct BenchRun {
  std::vector<BenchSample> samples;
  bool complete = true;
  std::string note;  // set when aborted with partial results
};

// The default single-site test bed: `nodes` identical edge nodes sized so
// max_instances uniform batches fit.
Inventory default_bench_inventory(const BenchConfig& config);

// Each round submits one slice of connected VFs that spreads per_round
// instances onto every node, then records the instantiation response time.
// Uses `external` when given; otherwise builds a fresh system from the
// default inventory.
BenchRun run_fig6(const BenchConfig& config, Orchestrator* external = nullptr);

struct AcceptanceReport {
  bool vf_non_decreasing = false;
  bool ratio_in_band = false;
  bool vf_ge_empty_pointwise = false;
  double ratio_at_60 = 0;  // instantiation-only ratio, overhead removed
  bool has_anchor = false;
  bool all_pass() const {
    return vf_non_decreasing && ratio_in_band && vf_ge_empty_pointwise;
  }
};

// Trend and ratio assertions over paired runs. The ratio removes the
// orchestration overhead so it compares the calibrated spawn anchors.
// Throws ValidationError when the series lengths differ.
AcceptanceReport check_acceptance(const std::vector<BenchSample>& vf,
                                  const std::vector<BenchSample>& empty,
                                  double overhead_s = 0.2);

// CSV columns: round,running_after,mode,response_time_s
std::string samples_to_csv(const std::vector<BenchSample>& samples);
std::vector<BenchSample> samples_from_csv(const std::string& csv);

// Minimal polyline chart of one or two sample series.
std::string fig6_svg(const std::vector<std::vector<BenchSample>>& series,
                     const std::vector<std::string>& labels);

}  // namespace slicenet

#endif  // SLICENET_BENCH_HPP_
