#include "slicenet/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slicenet/errors.hpp"

namespace slicenet {

namespace {

std::string two_digit(int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", n);
  return buf;
}

std::string three_digit(int n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", n);
  return buf;
}

}  // namespace

Inventory default_bench_inventory(const BenchConfig& config) {
  Inventory inv;
  inv.tenants.push_back({"po-bench", TenantRole::PRODUCT_OWNER});
  inv.tenants.push_back({"pm-factory", TenantRole::PRODUCT_MANUFACTURER});
  Site site;
  site.id = "factory";
  site.owner = "pm-factory";
  site.intra_site_latency_ms = 1.0;
  inv.sites.push_back(site);
  for (int i = 1; i <= config.nodes; ++i) {
    EdgeNode node;
    node.id = "pi-" + two_digit(i);
    node.site_id = "factory";
    node.max_instances = config.max_instances;
    // Headroom for max_instances batches of the uniform demand below.
    node.capacity.cpu_millicores = 100LL * config.max_instances * 2;
    node.capacity.memory_mb = 128LL * config.max_instances * 2;
    node.capacity.storage_mb = 64LL * config.max_instances * 2;
    node.capacity.bandwidth_mbps = 10LL * config.max_instances * 2;
    inv.nodes.push_back(node);
  }
  return inv;
}

namespace {

SliceBlueprint round_blueprint(const BenchConfig& config, int round) {
  SliceBlueprint bp;
  bp.id = "bench-round-" + two_digit(round);
  bp.tenant_id = "po-bench";
  int total = config.nodes * config.per_round;
  for (int i = 0; i < total; ++i) {
    VFSpec vf;
    vf.name = "vf-r" + two_digit(round) + "-" + three_digit(i);
    vf.kind = VFKind::VNF;
    vf.demand.cpu_millicores = 100;
    vf.demand.memory_mb = 128;
    vf.demand.storage_mb = 64;
    vf.demand.bandwidth_mbps = 10;
    bp.vfs.push_back(std::move(vf));
  }
  // Chain links make the set connected without pinning the spread.
  for (int i = 0; i + 1 < total; ++i) {
    VLinkSpec vl;
    vl.endpoint_a = bp.vfs[i].name;
    vl.endpoint_b = bp.vfs[i + 1].name;
    vl.bandwidth_mbps = 0;
    vl.max_latency_ms = 1000.0;
    bp.vlinks.push_back(std::move(vl));
  }
  return bp;
}

}  // namespace

BenchRun run_fig6(const BenchConfig& config, Orchestrator* external) {
  BenchRun run;
  if (config.rounds < 0 || config.per_round <= 0 || config.nodes <= 0) {
    throw ValidationError("config", "rounds/per_round/nodes must be positive");
  }
  if (config.rounds * config.per_round > config.max_instances) {
    throw ValidationError(
        "config", "rounds x per_round exceeds max_instances per node");
  }
  Orchestrator local = [&] {
    OrchestratorConfig oc;
    oc.orchestration_overhead_s = config.orchestration_overhead_s;
    LatencyModelParams params = config.params;
    params.seed = config.seed;
    oc.params = params;
    return Orchestrator(default_bench_inventory(config), oc);
  }();
  Orchestrator& orch = external ? *external : local;

  for (int round = 1; round <= config.rounds; ++round) {
    std::string id = orch.submit(round_blueprint(config, round));
    orch.process_pending();
    const Slice* slice = orch.find_slice(id);
    if (slice->state != SliceState::ADMITTED) {
      run.complete = false;
      run.note = "round " + std::to_string(round) + " rejected: " +
                 (slice->reject_reason
                      ? reject_reason_name(*slice->reject_reason)
                      : "unknown");
      return run;
    }
    const Slice& instantiated = orch.instantiate(id, config.mode);
    if (instantiated.state != SliceState::ACTIVE) {
      run.complete = false;
      run.note = "round " + std::to_string(round) + " failed to instantiate";
      return run;
    }
    BenchSample sample;
    sample.round = round;
    sample.running_after = round * config.per_round;
    sample.mode = config.mode;
    sample.response_time_s = *instantiated.response_time_s;
    run.samples.push_back(sample);
  }
  return run;
}

AcceptanceReport check_acceptance(const std::vector<BenchSample>& vf,
                                  const std::vector<BenchSample>& empty,
                                  double overhead_s) {
  if (vf.size() != empty.size()) {
    throw ValidationError("samples", "series lengths differ");
  }
  AcceptanceReport report;
  report.vf_non_decreasing = true;
  for (std::size_t i = 1; i < vf.size(); ++i) {
    if (vf[i].response_time_s < vf[i - 1].response_time_s) {
      report.vf_non_decreasing = false;
    }
  }
  report.vf_ge_empty_pointwise = true;
  for (std::size_t i = 0; i < vf.size(); ++i) {
    if (vf[i].response_time_s < empty[i].response_time_s) {
      report.vf_ge_empty_pointwise = false;
    }
  }
  for (std::size_t i = 0; i < vf.size(); ++i) {
    if (vf[i].running_after == 60 && empty[i].running_after == 60) {
      double vf_spawn = vf[i].response_time_s - overhead_s;
      double empty_spawn = empty[i].response_time_s - overhead_s;
      if (empty_spawn > 0) {
        report.ratio_at_60 = vf_spawn / empty_spawn;
        report.has_anchor = true;
      }
    }
  }
  report.ratio_in_band =
      report.has_anchor && report.ratio_at_60 >= 1.8 && report.ratio_at_60 <= 2.2;
  return report;
}

std::string samples_to_csv(const std::vector<BenchSample>& samples) {
  std::string out = "round,running_after,mode,response_time_s\n";
  for (const auto& s : samples) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%.6f\n", s.round,
                  s.running_after, spawn_mode_name(s.mode), s.response_time_s);
    out += buf;
  }
  return out;
}

std::vector<BenchSample> samples_from_csv(const std::string& csv) {
  std::vector<BenchSample> out;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line != "round,running_after,mode,response_time_s") {
        throw ValidationError("csv", "unexpected header: " + line);
      }
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    BenchSample s;
    std::getline(ls, field, ',');
    s.round = std::stoi(field);
    std::getline(ls, field, ',');
    s.running_after = std::stoi(field);
    std::getline(ls, field, ',');
    s.mode = spawn_mode_from_name(field);
    std::getline(ls, field, ',');
    s.response_time_s = std::stod(field);
    out.push_back(s);
  }
  return out;
}

std::string fig6_svg(const std::vector<std::vector<BenchSample>>& series,
                     const std::vector<std::string>& labels) {
  const int width = 640, height = 420;
  const int ml = 60, mr = 20, mt = 30, mb = 50;
  const int plot_w = width - ml - mr, plot_h = height - mt - mb;
  double max_x = 1, max_y = 1;
  for (const auto& s : series) {
    for (const auto& p : s) {
      max_x = std::max(max_x, static_cast<double>(p.running_after));
      max_y = std::max(max_y, p.response_time_s);
    }
  }
  max_y *= 1.1;
  auto px = [&](double x) { return ml + x / max_x * plot_w; };
  auto py = [&](double y) { return mt + plot_h - y / max_y * plot_h; };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double x = max_x * tick / 4.0;
    double y = max_y * tick / 4.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%.1f\" y=\"%d\" font-size=\"11\" "
                  "text-anchor=\"middle\">%.0f</text>\n",
                  px(x), mt + plot_h + 16, x);
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%.1f\" font-size=\"11\" "
                  "text-anchor=\"end\">%.1f</text>\n",
                  ml - 6, py(y) + 4, y);
    svg << buf;
  }
  svg << "  <text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">running instances per "
         "node</text>\n";
  svg << "  <text x=\"16\" y=\"" << mt + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "16 "
      << mt + plot_h / 2 << ")\">response time (s)</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 4];
    std::ostringstream points;
    for (const auto& p : series[i]) {
      points << px(p.running_after) << "," << py(p.response_time_s) << " ";
    }
    svg << "  <polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"" << points.str() << "\"/>\n";
    for (const auto& p : series[i]) {
      svg << "  <circle cx=\"" << px(p.running_after) << "\" cy=\""
          << py(p.response_time_s) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    if (i < labels.size()) {
      svg << "  <text x=\"" << ml + 10 << "\" y=\"" << mt + 16 + 18 * i
          << "\" font-size=\"12\" fill=\"" << color << "\">" << labels[i]
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace slicenet
