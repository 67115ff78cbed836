#ifndef SLICENET_API_HPP_
#define SLICENET_API_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "slicenet/orchestrator.hpp"

namespace slicenet {

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  Inventory inventory;
  OrchestratorConfig orchestrator;
};

// The PM-facing service. Endpoints:
//   POST   /slices                     blueprint -> 202 {slice_id, state}
//   GET    /slices/{id}                state + plan
//   POST   /slices/{id}/reconfigure    delta -> 200 | 409 INFEASIBLE_DELTA
//   DELETE /slices/{id}                terminate
//   POST   /federations                {exporter_slice_id, importer_slice_id, rules}
//   POST   /federations/{id}/consent
//   POST   /delegations                grant
//   POST   /bench/fig6                 config -> {samples, csv}
// Every mutating call carries the tenant credential header X-Tenant
// (401 when missing or unknown, 403 when not permitted); responses carry
// X-Request-Id and echo it in the body. All mutations funnel through one
// serialized decision queue; reads copy immutable snapshots.
class ApiServer {
 public:
  explicit ApiServer(ApiConfig config);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds and serves on a background thread. Returns false when the port
  // cannot be bound.
  bool start();
  void stop();
  int port() const { return port_; }
  std::string base_url() const;

  Orchestrator& orchestrator() { return orch_; }

 private:
  struct Impl;  // hides httplib from this header
  ApiConfig config_;
  Orchestrator orch_;
  std::unique_ptr<Impl> impl_;
  std::thread serve_thread_;
  std::mutex decision_queue_;
  std::uint64_t next_request_ = 1;
  int port_ = 0;
};

}  // namespace slicenet

#endif  // SLICENET_API_HPP_
