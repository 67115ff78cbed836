#include "slicenet/api.hpp"

#include <cstdio>

#include <httplib.h>
#include <json.hpp>

#include "slicenet/bench.hpp"
#include "slicenet/errors.hpp"
#include "slicenet/json_io.hpp"

namespace slicenet {

using nlohmann::json;

struct ApiServer::Impl {
  httplib::Server server;
};

namespace {

json slice_to_status_json(const Slice& slice) {
  json out = json::object();
  out["slice_id"] = slice.id;
  out["state"] = slice_state_name(slice.state);
  out["arrival"] = slice.arrival;
  if (slice.plan) out["plan"] = plan_to_json(*slice.plan);
  if (slice.response_time_s) out["response_time_s"] = *slice.response_time_s;
  if (slice.reject_reason) {
    out["reject_reason"] = reject_reason_name(*slice.reject_reason);
  }
  out["federations"] = slice.federations;
  return out;
}

}  // namespace

ApiServer::ApiServer(ApiConfig config)
    : config_(std::move(config)),
      orch_(config_.inventory, config_.orchestrator),
      impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;

  auto respond = [this](httplib::Response& res, int status, json body) {
    std::string request_id;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "req-%06llu",
                    static_cast<unsigned long long>(next_request_++));
      request_id = buf;
    }
    body["request_id"] = request_id;
    res.status = status;
    res.set_header("X-Request-Id", request_id);
    res.set_content(body.dump(2) + "\n", "application/json");
  };

  // Returns the calling tenant or replies 401. Mutating endpoints all go
  // through this.
  auto tenant_of = [this, respond](const httplib::Request& req,
                                   httplib::Response& res) -> std::string {
    std::string tenant = req.get_header_value("X-Tenant");
    if (tenant.empty()) {
      respond(res, 401, {{"error", "missing X-Tenant credential header"}});
      return "";
    }
    if (!orch_.inventory().find_tenant(tenant)) {
      respond(res, 401, {{"error", "unknown tenant " + tenant}});
      return "";
    }
    return tenant;
  };

  server.Post("/slices", [this, respond, tenant_of](const httplib::Request& req,
                                                    httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    try {
      SliceBlueprint bp = parse_blueprint_text(req.body);
      if (bp.tenant_id != tenant) {
        respond(res, 403,
                {{"error", "credential does not match blueprint tenant"}});
        return;
      }
      std::string id = orch_.submit(bp);
      orch_.process_pending();
      if (orch_.slice(id).state == SliceState::ADMITTED) {
        orch_.instantiate(id);
      }
      json body = slice_to_status_json(orch_.slice(id));
      respond(res, 202, body);
    } catch (const ValidationError& e) {
      respond(res, 400, {{"error", e.what()}, {"path", e.path()}});
    } catch (const Error& e) {
      respond(res, 500, {{"error", e.what()}});
    }
  });

  server.Get(R"(/slices/([^/]+))", [this, respond, tenant_of](
                                       const httplib::Request& req,
                                       httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    const std::string id = req.matches[1];
    const Slice* slice = orch_.find_slice(id);
    if (!slice) {
      respond(res, 404, {{"error", "unknown slice " + id}});
      return;
    }
    bool readable = orch_.authorize(tenant, GrantAction::MONITOR, id) ||
                    orch_.authorize(tenant, GrantAction::RECONFIGURE, id) ||
                    orch_.authorize(tenant, GrantAction::MAINTAIN, id);
    if (!readable) {
      respond(res, 403, {{"error", "tenant " + tenant + " may not read " + id}});
      return;
    }
    respond(res, 200, slice_to_status_json(*slice));
  });

  server.Post(R"(/slices/([^/]+)/reconfigure)",
              [this, respond, tenant_of](const httplib::Request& req,
                                         httplib::Response& res) {
                std::lock_guard lock(decision_queue_);
                std::string tenant = tenant_of(req, res);
                if (tenant.empty()) return;
                const std::string id = req.matches[1];
                try {
                  ReconfigureDelta delta =
                      delta_from_json(json::parse(req.body));
                  ReconfigureOutcome outcome =
                      orch_.reconfigure(id, delta, tenant);
                  if (!outcome.ok) {
                    respond(res, 409,
                            {{"error", "INFEASIBLE_DELTA"},
                             {"detail", outcome.detail}});
                    return;
                  }
                  respond(res, 200, slice_to_status_json(orch_.slice(id)));
                } catch (const json::exception& e) {
                  respond(res, 400, {{"error", e.what()}});
                } catch (const NotFoundError& e) {
                  respond(res, 404, {{"error", e.what()}});
                } catch (const UnauthorizedError& e) {
                  respond(res, 403, {{"error", e.what()}});
                } catch (const ValidationError& e) {
                  respond(res, 400, {{"error", e.what()}, {"path", e.path()}});
                } catch (const Error& e) {
                  respond(res, 409, {{"error", e.what()}});
                }
              });

  server.Delete(R"(/slices/([^/]+))", [this, respond, tenant_of](
                                          const httplib::Request& req,
                                          httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    const std::string id = req.matches[1];
    try {
      const Slice& slice = orch_.terminate(id, tenant);
      respond(res, 200, slice_to_status_json(slice));
    } catch (const NotFoundError& e) {
      respond(res, 404, {{"error", e.what()}});
    } catch (const UnauthorizedError& e) {
      respond(res, 403, {{"error", e.what()}});
    } catch (const Error& e) {
      respond(res, 409, {{"error", e.what()}});
    }
  });

  server.Post("/federations", [this, respond, tenant_of](
                                  const httplib::Request& req,
                                  httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    try {
      json body = json::parse(req.body);
      std::vector<SFIRule> rules;
      if (body.contains("rules")) {
        rules = sfi_rules_from_json(body.at("rules"), "/rules");
      }
      FederationLink& link = orch_.create_federation(
          body.at("exporter_slice_id").get<std::string>(),
          body.at("importer_slice_id").get<std::string>(), rules, tenant);
      if (body.value("encrypted", false)) link.encrypted = true;
      respond(res, 201,
              {{"federation_id", link.id},
               {"state", federation_state_name(link.state)}});
    } catch (const json::exception& e) {
      respond(res, 400, {{"error", e.what()}});
    } catch (const NotFoundError& e) {
      respond(res, 404, {{"error", e.what()}});
    } catch (const UnauthorizedError& e) {
      respond(res, 403, {{"error", e.what()}});
    } catch (const ValidationError& e) {
      respond(res, 400, {{"error", e.what()}, {"path", e.path()}});
    } catch (const Error& e) {
      respond(res, 409, {{"error", e.what()}});
    }
  });

  server.Post(R"(/federations/([^/]+)/consent)",
              [this, respond, tenant_of](const httplib::Request& req,
                                         httplib::Response& res) {
                std::lock_guard lock(decision_queue_);
                std::string tenant = tenant_of(req, res);
                if (tenant.empty()) return;
                const std::string id = req.matches[1];
                try {
                  FederationLink& link = orch_.consent_federation(id, tenant);
                  respond(res, 200,
                          {{"federation_id", link.id},
                           {"state", federation_state_name(link.state)}});
                } catch (const NotFoundError& e) {
                  respond(res, 404, {{"error", e.what()}});
                } catch (const UnauthorizedError& e) {
                  respond(res, 403, {{"error", e.what()}});
                }
              });

  server.Post("/delegations", [this, respond, tenant_of](
                                  const httplib::Request& req,
                                  httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    try {
      json body = json::parse(req.body);
      DelegationGrant grant;
      grant.grantor = body.value("grantor", tenant);
      if (grant.grantor != tenant) {
        respond(res, 403, {{"error", "grantor must match credential"}});
        return;
      }
      grant.grantee = body.at("grantee").get<std::string>();
      for (const auto& s : body.at("scope")) {
        grant.scope.insert(s.get<std::string>());
      }
      for (const auto& a : body.at("actions")) {
        grant.actions.insert(grant_action_from_name(a.get<std::string>()));
      }
      grant.expiry = body.at("expiry").get<LogicalTime>();
      std::string id = orch_.delegate(grant);
      respond(res, 201, {{"grant_id", id}});
    } catch (const json::exception& e) {
      respond(res, 400, {{"error", e.what()}});
    } catch (const OwnershipError& e) {
      respond(res, 403, {{"error", e.what()}});
    } catch (const ValidationError& e) {
      respond(res, 400, {{"error", e.what()}, {"path", e.path()}});
    }
  });

  // Benchmarks run against an isolated system built from bench defaults so
  // they never consume tenant capacity on the serving inventory.
  server.Post("/bench/fig6", [this, respond, tenant_of](
                                 const httplib::Request& req,
                                 httplib::Response& res) {
    std::lock_guard lock(decision_queue_);
    std::string tenant = tenant_of(req, res);
    if (tenant.empty()) return;
    try {
      BenchConfig config;
      if (!req.body.empty()) {
        json body = json::parse(req.body);
        if (body.contains("mode")) {
          config.mode = spawn_mode_from_name(body["mode"].get<std::string>());
        }
        config.rounds = body.value("rounds", config.rounds);
        config.per_round = body.value("per_round", config.per_round);
        config.nodes = body.value("nodes", config.nodes);
        config.seed = body.value("seed", config.seed);
        config.params.seed = config.seed;
        config.params.noise_sigma_s =
            body.value("noise_sigma_s", config.params.noise_sigma_s);
      }
      BenchRun run = run_fig6(config);
      json samples = json::array();
      for (const auto& s : run.samples) {
        samples.push_back({{"round", s.round},
                           {"running_after", s.running_after},
                           {"mode", spawn_mode_name(s.mode)},
                           {"response_time_s", s.response_time_s}});
      }
      respond(res, 200,
              {{"samples", samples},
               {"csv", samples_to_csv(run.samples)},
               {"complete", run.complete},
               {"note", run.note}});
    } catch (const json::exception& e) {
      respond(res, 400, {{"error", e.what()}});
    } catch (const ValidationError& e) {
      respond(res, 400, {{"error", e.what()}, {"path", e.path()}});
    }
  });
}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::start() {
  auto& server = impl_->server;
  if (config_.port == 0) {
    port_ = server.bind_to_any_port(config_.host);
    if (port_ <= 0) return false;
  } else {
    if (!server.bind_to_port(config_.host, config_.port)) return false;
    port_ = config_.port;
  }
  serve_thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  server.wait_until_ready();
  return true;
}

void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (serve_thread_.joinable()) serve_thread_.join();
}

std::string ApiServer::base_url() const {
  return "http://" + config_.host + ":" + std::to_string(port_);
}

}  // namespace slicenet
