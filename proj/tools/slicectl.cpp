// slicectl: PO-facing client for the slice orchestration service, plus the
// local bench/scenario harness and the PM-side `serve` entry point.
//
// Exit codes: 0 success, 1 validation failure, 2 server/transport error.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "slicenet/api.hpp"
#include "slicenet/bench.hpp"
#include "slicenet/errors.hpp"
#include "slicenet/json_io.hpp"
#include "slicenet/scenarios.hpp"

using nlohmann::json;
using namespace slicenet;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kServerError = 2;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

#ifndef SLICECTL_DEFAULT_FIXTURES
#define SLICECTL_DEFAULT_FIXTURES "fixtures"
#endif

std::string default_fixtures() {
  return env_or("SLICENET_FIXTURES", SLICECTL_DEFAULT_FIXTURES);
}

std::string default_server() {
  return env_or("SLICENET_SERVER", "http://127.0.0.1:8080");
}

struct HttpReply {
  int status = 0;
  json body;
};

std::optional<HttpReply> http_call(const std::string& server,
                                   const std::string& method,
                                   const std::string& path,
                                   const std::string& tenant,
                                   const std::string& payload) {
  httplib::Client client(server);
  client.set_connection_timeout(5);
  httplib::Headers headers;
  if (!tenant.empty()) headers.emplace("X-Tenant", tenant);
  httplib::Result result;
  if (method == "GET") {
    result = client.Get(path, headers);
  } else if (method == "DELETE") {
    result = client.Delete(path, headers);
  } else {
    result = client.Post(path, headers, payload, "application/json");
  }
  if (!result) {
    std::cerr << "error: cannot reach " << server << " ("
              << httplib::to_string(result.error()) << ")\n";
    return std::nullopt;
  }
  HttpReply reply;
  reply.status = result->status;
  if (!result->body.empty()) {
    reply.body = json::parse(result->body, nullptr, false);
    if (reply.body.is_discarded()) reply.body = json{{"raw", result->body}};
  }
  return reply;
}

int finish(const HttpReply& reply) {
  std::cout << reply.body.dump(2) << "\n";
  if (reply.status >= 200 && reply.status < 300) return kOk;
  if (reply.status >= 400 && reply.status < 500) return kValidationFailure;
  return kServerError;
}

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"industrial network-slice orchestration client"};
  app.require_subcommand(1);

  std::string server = default_server();
  std::string tenant;
  app.add_option("--server", server, "service base URL (env SLICENET_SERVER)");
  app.add_option("--tenant", tenant, "tenant credential for mutating calls");

  // serve ----------------------------------------------------------------
  auto* serve_cmd = app.add_subcommand("serve", "run the PM-side service");
  std::string inventory_path;
  std::string listen = env_or("SLICENET_LISTEN", "127.0.0.1:8080");
  std::string config_path;
  std::string event_log_path;
  double overhead = 0.2;
  std::uint64_t seed = 1;
  double noise = 0.0;
  bool realtime = false;
  serve_cmd->add_option("--inventory", inventory_path, "inventory JSON file")
      ->required();
  serve_cmd->add_option("--listen", listen,
                        "host:port to bind (env SLICENET_LISTEN)");
  serve_cmd->add_option("--config", config_path,
                        "latency model params JSON file");
  serve_cmd->add_option("--event-log", event_log_path,
                        "append lifecycle transitions to this file");
  serve_cmd->add_option("--overhead", overhead, "orchestration overhead (s)");
  serve_cmd->add_option("--seed", seed, "emulator rng seed");
  serve_cmd->add_option("--noise", noise, "spawn-time noise sigma (s)");
  serve_cmd->add_flag("--realtime", realtime,
                      "sleep for emulated durations instead of virtual time");

  // request ----------------------------------------------------------------
  auto* request_cmd = app.add_subcommand("request", "submit a slice blueprint");
  std::string blueprint_path;
  request_cmd->add_option("blueprint", blueprint_path, "blueprint JSON file")
      ->required();

  // status -----------------------------------------------------------------
  auto* status_cmd = app.add_subcommand("status", "show a slice's state");
  std::string slice_id;
  status_cmd->add_option("id", slice_id, "slice id")->required();

  // reconfigure --------------------------------------------------------------
  auto* reconf_cmd = app.add_subcommand("reconfigure", "apply a slice delta");
  std::string reconf_id, delta_path;
  reconf_cmd->add_option("id", reconf_id, "slice id")->required();
  reconf_cmd->add_option("delta", delta_path, "delta JSON file")->required();

  // terminate ----------------------------------------------------------------
  auto* term_cmd = app.add_subcommand("terminate", "terminate a slice");
  std::string term_id;
  term_cmd->add_option("id", term_id, "slice id")->required();

  // federate -----------------------------------------------------------------
  auto* fed_cmd =
      app.add_subcommand("federate", "propose a federation between slices");
  std::string exporter_id, importer_id, rules_path;
  fed_cmd->add_option("exporter", exporter_id, "exporter slice id")->required();
  fed_cmd->add_option("importer", importer_id, "importer slice id")->required();
  fed_cmd->add_option("rules", rules_path, "SFI rules JSON file")->required();

  // consent ------------------------------------------------------------------
  auto* consent_cmd =
      app.add_subcommand("consent", "record consent on a federation");
  std::string fed_id;
  consent_cmd->add_option("id", fed_id, "federation id")->required();

  // bench ----------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "benchmark harness");
  auto* fig6_cmd = bench_cmd->add_subcommand(
      "fig6", "slice-instantiation response-time experiment");
  std::string mode_name = "vf";
  std::string csv_path, svg_path;
  int rounds = 8, per_round = 10, nodes = 9;
  std::uint64_t bench_seed = 1;
  double bench_noise = 0.0;
  double bench_overhead = 0.2;
  bool remote = false;
  fig6_cmd->add_option("--mode", mode_name, "empty | vf")->required();
  fig6_cmd->add_option("--csv", csv_path, "write samples CSV here");
  fig6_cmd->add_option("--svg", svg_path, "write a chart here");
  fig6_cmd->add_option("--rounds", rounds, "rounds to run");
  fig6_cmd->add_option("--per-round", per_round, "instances per node per round");
  fig6_cmd->add_option("--nodes", nodes, "edge node count");
  fig6_cmd->add_option("--seed", bench_seed, "rng seed");
  fig6_cmd->add_option("--noise", bench_noise, "spawn-time noise sigma (s)");
  fig6_cmd->add_option("--overhead", bench_overhead,
                       "orchestration overhead (s)");
  fig6_cmd->add_flag("--remote", remote, "run via POST /bench/fig6 instead");

  // scenario ---------------------------------------------------------------
  auto* scenario_cmd =
      app.add_subcommand("scenario", "run a bundled use-case scenario");
  std::string scenario_name;
  std::string fixtures = default_fixtures();
  scenario_cmd
      ->add_option("name", scenario_name, "monitoring | maintenance | sfaas")
      ->required();
  scenario_cmd->add_option("--fixtures", fixtures,
                           "fixtures directory (env SLICENET_FIXTURES)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) {
      auto colon = listen.rfind(':');
      ApiConfig config;
      config.host = listen.substr(0, colon);
      config.port = std::stoi(listen.substr(colon + 1));
      config.inventory = parse_inventory_file(inventory_path);
      config.orchestrator.orchestration_overhead_s = overhead;
      config.orchestrator.realtime = realtime;
      config.orchestrator.event_log_path = event_log_path;
      LatencyModelParams params = default_params();
      if (!config_path.empty()) {
        params = params_from_json(json::parse(read_file(config_path)), "");
      }
      params.seed = seed;
      if (noise > 0) params.noise_sigma_s = noise;
      config.orchestrator.params = params;
      ApiServer api(std::move(config));
      if (!api.start()) {
        std::cerr << "error: cannot bind " << listen << "\n";
        return kServerError;
      }
      std::cout << "serving on " << api.base_url() << "\n" << std::flush;
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
      api.stop();
      return kOk;
    }

    if (*request_cmd) {
      // Validate locally first so schema errors fail fast with a path.
      SliceBlueprint bp = parse_blueprint_file(blueprint_path);
      std::string credential = tenant.empty() ? bp.tenant_id : tenant;
      auto reply = http_call(server, "POST", "/slices", credential,
                             read_file(blueprint_path));
      if (!reply) return kServerError;
      int code = finish(*reply);
      if (code == kOk && reply->body.value("state", "") == "REJECTED") {
        std::cerr << "request rejected: "
                  << reply->body.value("reject_reason", "unknown") << "\n";
        return kValidationFailure;
      }
      return code;
    }
    if (*status_cmd) {
      auto reply = http_call(server, "GET", "/slices/" + slice_id, tenant, "");
      if (!reply) return kServerError;
      if (reply->status == 200 && reply->body.contains("state")) {
        std::cout << reply->body["state"].get<std::string>() << "\n";
        return kOk;
      }
      return finish(*reply);
    }
    if (*reconf_cmd) {
      auto reply = http_call(server, "POST",
                             "/slices/" + reconf_id + "/reconfigure", tenant,
                             read_file(delta_path));
      if (!reply) return kServerError;
      return finish(*reply);
    }
    if (*term_cmd) {
      auto reply =
          http_call(server, "DELETE", "/slices/" + term_id, tenant, "");
      if (!reply) return kServerError;
      return finish(*reply);
    }
    if (*fed_cmd) {
      json body = json::object();
      body["exporter_slice_id"] = exporter_id;
      body["importer_slice_id"] = importer_id;
      body["rules"] = json::parse(read_file(rules_path));
      auto reply =
          http_call(server, "POST", "/federations", tenant, body.dump());
      if (!reply) return kServerError;
      return finish(*reply);
    }
    if (*consent_cmd) {
      auto reply = http_call(server, "POST",
                             "/federations/" + fed_id + "/consent", tenant, "");
      if (!reply) return kServerError;
      return finish(*reply);
    }

    if (*fig6_cmd) {
      if (remote) {
        json body = {{"mode", mode_name},   {"rounds", rounds},
                     {"per_round", per_round}, {"nodes", nodes},
                     {"seed", bench_seed},  {"noise_sigma_s", bench_noise}};
        std::string credential = tenant.empty() ? "po-bench" : tenant;
        auto reply =
            http_call(server, "POST", "/bench/fig6", credential, body.dump());
        if (!reply) return kServerError;
        if (reply->status == 200 && !csv_path.empty()) {
          write_file(csv_path, reply->body["csv"].get<std::string>());
        }
        return finish(*reply);
      }
      BenchConfig config;
      config.mode = spawn_mode_from_name(mode_name);
      config.rounds = rounds;
      config.per_round = per_round;
      config.nodes = nodes;
      config.seed = bench_seed;
      config.params.seed = bench_seed;
      config.params.noise_sigma_s = bench_noise;
      config.orchestration_overhead_s = bench_overhead;
      BenchRun run = run_fig6(config);
      std::string csv = samples_to_csv(run.samples);
      std::cout << csv;
      if (!run.complete) std::cerr << "warning: partial run: " << run.note
                                   << "\n";
      if (!csv_path.empty()) write_file(csv_path, csv);
      if (!svg_path.empty()) {
        write_file(svg_path,
                   fig6_svg({run.samples}, {std::string("mode=") + mode_name}));
      }
      return run.complete ? kOk : kValidationFailure;
    }

    if (*scenario_cmd) {
      ScenarioReport report = run_scenario(scenario_name, fixtures);
      std::cout << report.to_text();
      return report.ok() ? kOk : kValidationFailure;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kServerError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kServerError;
  }
  return kOk;
}
