#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slicenet/emu.hpp"
#include "slicenet/errors.hpp"

using namespace slicenet;

namespace {

EdgeNode make_node(const std::string& id, int max_instances = 80) {
  EdgeNode n;
  n.id = id;
  n.site_id = "factory";
  n.capacity.cpu_millicores = 100000;
  n.capacity.memory_mb = 100000;
  n.capacity.storage_mb = 100000;
  n.capacity.bandwidth_mbps = 100000;
  n.max_instances = max_instances;
  return n;
}

std::vector<SpawnSpec> batch(int count, std::int64_t cpu = 10) {
  std::vector<SpawnSpec> specs;
  for (int i = 0; i < count; ++i) {
    SpawnSpec s;
    s.slice_id = "sl-000001";
    s.vf_name = "vf" + std::to_string(i);
    s.demand.cpu_millicores = cpu;
    specs.push_back(s);
  }
  return specs;
}

}  // namespace

TEST_CASE("default params solve the two calibration anchors") {
  LatencyModelParams p = default_params();
  // Independent linear solve through (60, 8.2) and (60, 4.1) with alpha 0.5.
  double beta_vf = (8.2 - 0.5) / 60.0;
  double beta_empty = (4.1 - 0.5) / 60.0;
  CHECK(p.with_vf.alpha_s == doctest::Approx(0.5));
  CHECK(p.empty.alpha_s == doctest::Approx(0.5));
  CHECK(p.with_vf.beta_s_per_instance == doctest::Approx(beta_vf));
  CHECK(p.with_vf.beta_s_per_instance == doctest::Approx(0.1283333333));
  CHECK(p.empty.beta_s_per_instance == doctest::Approx(beta_empty));
  CHECK(p.empty.beta_s_per_instance == doctest::Approx(0.06));
  CHECK(p.noise_sigma_s == 0);
  // WITH_VF dominates EMPTY at every k.
  for (int k = 0; k <= 80; ++k) {
    double t_vf = p.with_vf.alpha_s + p.with_vf.beta_s_per_instance * k;
    double t_empty = p.empty.alpha_s + p.empty.beta_s_per_instance * k;
    CHECK(t_vf >= t_empty);
  }
}

TEST_CASE("spawn time hits the calibration anchors at 60 running instances") {
  Emulator emu({make_node("pi")}, default_params());
  SpawnResult r = emu.spawn_batch("pi", batch(60), SpawnMode::WITH_VF);
  CHECK(r.elapsed_s == doctest::Approx(8.2));
  CHECK(r.instance_ids.size() == 60);

  Emulator emu2({make_node("pi")}, default_params());
  SpawnResult r2 = emu2.spawn_batch("pi", batch(60), SpawnMode::EMPTY);
  CHECK(r2.elapsed_s == doctest::Approx(4.1));
}

TEST_CASE("empty batch costs zero seconds") {
  Emulator emu({make_node("pi")}, default_params());
  SpawnResult r = emu.spawn_batch("pi", {}, SpawnMode::WITH_VF);
  CHECK(r.elapsed_s == 0.0);
  CHECK(r.instance_ids.empty());
}

TEST_CASE("spawn time uses the count after creation") {
  Emulator emu({make_node("pi")}, default_params());
  emu.spawn_batch("pi", batch(10), SpawnMode::WITH_VF);
  SpawnResult r = emu.spawn_batch("pi", batch(10), SpawnMode::WITH_VF);
  LatencyModelParams p = default_params();
  CHECK(r.elapsed_s ==
        doctest::Approx(p.with_vf.alpha_s + p.with_vf.beta_s_per_instance * 20));
}

TEST_CASE("monotonicity: strictly increasing in k with zero noise") {
  Emulator emu({make_node("pi")}, default_params());
  double last = -1;
  for (int round = 0; round < 8; ++round) {
    SpawnResult r = emu.spawn_batch("pi", batch(10), SpawnMode::WITH_VF);
    CHECK(r.elapsed_s > last);
    last = r.elapsed_s;
  }
}

TEST_CASE("instance cap: all-or-nothing on overflow") {
  Emulator emu({make_node("pi", 15)}, default_params());
  emu.spawn_batch("pi", batch(10), SpawnMode::WITH_VF);
  CHECK_THROWS_AS(emu.spawn_batch("pi", batch(6), SpawnMode::WITH_VF),
                  CapacityError);
  CHECK(emu.node("pi").count() == 10);  // no partial creation
  CHECK_NOTHROW(emu.spawn_batch("pi", batch(5), SpawnMode::WITH_VF));
}

TEST_CASE("capacity: componentwise check before any creation") {
  EdgeNode node = make_node("pi");
  node.capacity.cpu_millicores = 100;
  Emulator emu({node}, default_params());
  CHECK_THROWS_AS(emu.spawn_batch("pi", batch(11, 10), SpawnMode::WITH_VF),
                  CapacityError);
  CHECK(emu.node("pi").count() == 0);
  CHECK_NOTHROW(emu.spawn_batch("pi", batch(10, 10), SpawnMode::WITH_VF));
}

TEST_CASE("teardown restores pristine capacity and rejects unknown ids") {
  Emulator emu({make_node("pi")}, default_params());
  SpawnResult r = emu.spawn_batch("pi", batch(7, 13), SpawnMode::WITH_VF);
  CHECK_THROWS_AS(emu.teardown("pi", {"vi-999999"}), NotFoundError);
  CHECK(emu.node("pi").count() == 7);  // unknown id left node unchanged

  ResourceVector released = emu.teardown("pi", r.instance_ids);
  CHECK(released.cpu_millicores == 7 * 13);
  CHECK(emu.node("pi").count() == 0);
  CHECK(emu.node("pi").used().is_zero());

  ResourceVector none = emu.teardown("pi", {});
  CHECK(none.is_zero());
}

TEST_CASE("determinism: same seed, same noisy elapsed values") {
  LatencyModelParams p = default_params();
  p.noise_sigma_s = 0.5;
  p.seed = 42;
  auto run = [&] {
    Emulator emu({make_node("a"), make_node("b")}, p);
    std::vector<double> out;
    for (int i = 0; i < 5; ++i) {
      out.push_back(emu.spawn_batch("a", batch(3), SpawnMode::WITH_VF).elapsed_s);
      out.push_back(emu.spawn_batch("b", batch(3), SpawnMode::EMPTY).elapsed_s);
    }
    return out;
  };
  auto first = run();
  auto second = run();
  CHECK(first == second);

  p.seed = 43;
  Emulator emu({make_node("a"), make_node("b")}, p);
  std::vector<double> other;
  for (int i = 0; i < 5; ++i) {
    other.push_back(emu.spawn_batch("a", batch(3), SpawnMode::WITH_VF).elapsed_s);
    other.push_back(emu.spawn_batch("b", batch(3), SpawnMode::EMPTY).elapsed_s);
  }
  CHECK(first != other);
}

TEST_CASE("per-node noise streams are independent of spawn order") {
  LatencyModelParams p = default_params();
  p.noise_sigma_s = 0.3;
  Emulator forward({make_node("a"), make_node("b")}, p);
  double fa = forward.spawn_batch("a", batch(2), SpawnMode::WITH_VF).elapsed_s;
  double fb = forward.spawn_batch("b", batch(2), SpawnMode::WITH_VF).elapsed_s;
  Emulator reverse({make_node("a"), make_node("b")}, p);
  double rb = reverse.spawn_batch("b", batch(2), SpawnMode::WITH_VF).elapsed_s;
  double ra = reverse.spawn_batch("a", batch(2), SpawnMode::WITH_VF).elapsed_s;
  CHECK(fa == ra);
  CHECK(fb == rb);
}

TEST_CASE("noise never drives elapsed below zero") {
  LatencyModelParams p = default_params();
  p.noise_sigma_s = 50.0;  // absurd sigma forces clamping
  Emulator emu({make_node("pi")}, p);
  for (int i = 0; i < 60; ++i) {
    SpawnResult r = emu.spawn_batch("pi", batch(1), SpawnMode::EMPTY);
    CHECK(r.elapsed_s >= 0.0);
  }
}

TEST_CASE("accounting fuzz: spawned demand never exceeds capacity") {
  EdgeNode node = make_node("pi", 40);
  node.capacity.cpu_millicores = 1000;
  Emulator emu({node}, default_params());
  std::mt19937_64 rng(5);
  std::vector<std::string> live;
  for (int step = 0; step < 500; ++step) {
    if (rng() % 2 == 0) {
      int n = 1 + static_cast<int>(rng() % 4);
      try {
        SpawnResult r =
            emu.spawn_batch("pi", batch(n, 30 + rng() % 100),
                            SpawnMode::WITH_VF);
        live.insert(live.end(), r.instance_ids.begin(), r.instance_ids.end());
      } catch (const CapacityError&) {
      }
    } else if (!live.empty()) {
      std::string id = live[rng() % live.size()];
      emu.teardown("pi", {id});
      live.erase(std::find(live.begin(), live.end(), id));
    }
    const NodeRuntime& rt = emu.node("pi");
    CHECK(rt.used().cpu_millicores <= rt.node.capacity.cpu_millicores);
    CHECK(rt.count() <= rt.node.max_instances);
  }
}

TEST_CASE("virtual clock only moves when told") {
  Emulator emu({make_node("pi")}, default_params());
  CHECK(emu.now_s() == 0.0);
  emu.spawn_batch("pi", batch(10), SpawnMode::WITH_VF);
  CHECK(emu.now_s() == 0.0);  // agents report durations; the join advances
  emu.advance_clock(2.5);
  CHECK(emu.now_s() == doctest::Approx(2.5));
}
