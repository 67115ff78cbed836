#ifndef SLICENET_FEDERATION_HPP_
#define SLICENET_FEDERATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "slicenet/model.hpp"

namespace slicenet {

enum class FederationState { PROPOSED, ACTIVE, CLOSED };

const char* federation_state_name(FederationState s);

// Negotiated cross-slice boundary. ACTIVE only after both the exporter and
// importer tenants consent.
struct FederationLink {
  std::string id;
  std::string exporter_slice_id;
  std::string importer_slice_id;
  std::string exporter_tenant;
  std::string importer_tenant;
  std::vector<SFIRule> rules;
  FederationState state = FederationState::PROPOSED;
  std::set<std::string> consents;
  bool encrypted = false;  // recorded in logs only, no cryptography
};

using FieldValue = std::variant<double, std::string>;

struct DataRecord {
  std::string stream_id;
  std::string slice_id;
  LogicalTime timestamp = 0;
  std::uint64_t sequence = 0;
  std::map<std::string, FieldValue> fields;
  Sensitivity sensitivity = Sensitivity::PUBLIC;
};

enum class FlowVerdict { PASS, DENY, DEFER };

struct FlowDecision {
  FlowVerdict verdict = FlowVerdict::DENY;
  std::optional<DataRecord> record;  // PASS only
  std::string reason;                // DENY only (NO_RULE, LOCAL_ONLY, ...)
};

// Slice Federation Interface engine: link registry, per-link transform
// evaluation with aggregation buffers, and the PASS/DENY audit log.
// Link state changes are driven by the orchestrator's serialized queue.
class FederationEngine {
 public:
  // Validates rules against the exporter's streams. Throws
  // SelfFederationError when exporter == importer and ValidationError for
  // rules naming unknown streams.
  FederationLink& create_link(const std::string& exporter_slice,
                              const std::string& importer_slice,
                              const std::string& exporter_tenant,
                              const std::string& importer_tenant,
                              const std::vector<SFIRule>& rules,
                              const SliceBlueprint& exporter_blueprint,
                              LogicalTime now);

  // Records a consent; the link turns ACTIVE once both tenants consented.
  // Throws NotFoundError / UnauthorizedError (tenant not a party).
  FederationLink& consent(const std::string& link_id,
                          const std::string& tenant, LogicalTime now);

  // Applies the link's matching rules to one record. DENY unless the link
  // is ACTIVE and a rule matches the stream; LOCAL_ONLY records are always
  // denied. OUTBOUND rules run before INBOUND ones; AGGREGATE buffers
  // until its window fills (DEFER). Every PASS/DENY is audit-logged.
  FlowDecision evaluate_flow(const std::string& link_id,
                             const DataRecord& record, LogicalTime now);

  // Union of PASS-ed records over links sharing one importer, ordered by
  // (timestamp, exporter site id, sequence). exporter_site maps link id to
  // the site used for the tie-break.
  std::vector<DataRecord> merge_streams(
      const std::vector<std::string>& link_ids,
      const std::map<std::string, std::vector<DataRecord>>& records_per_link,
      const std::map<std::string, std::string>& exporter_site, LogicalTime now);

  void close_links_for_slice(const std::string& slice_id, LogicalTime now);

  // Import path: reinstates a link under its original id.
  FederationLink& restore_link(FederationLink link);

  const FederationLink* find_link(const std::string& id) const;
  FederationLink* find_link(const std::string& id);
  const std::map<std::string, FederationLink>& links() const { return links_; }

  const std::vector<std::string>& audit_log() const { return audit_; }
  std::string audit_log_text() const;
  void audit_note(LogicalTime now, const std::string& note);

 private:
  struct WindowKey {
    std::string link_id;
    std::size_t rule_index;
    std::string stream_id;
    auto operator<=>(const WindowKey&) const = default;
  };

  std::optional<DataRecord> apply_transform(const std::string& link_id,
                                            std::size_t rule_index,
                                            const Transform& t,
                                            const DataRecord& record);

  std::map<std::string, FederationLink> links_;
  std::map<WindowKey, std::vector<DataRecord>> windows_;
  std::map<WindowKey, std::uint64_t> emitted_;  // synthetic sequence counters
  std::vector<std::string> audit_;
  std::uint64_t next_link_ = 1;
};

}  // namespace slicenet

#endif  // SLICENET_FEDERATION_HPP_
