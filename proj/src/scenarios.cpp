#include "slicenet/scenarios.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "slicenet/bench.hpp"
#include "slicenet/errors.hpp"
#include "slicenet/json_io.hpp"
#include "slicenet/orchestrator.hpp"

namespace slicenet {

using nlohmann::json;

namespace {

struct ScenarioContext {
  explicit ScenarioContext(Orchestrator o) : orch(std::move(o)) {}

  Orchestrator orch;
  std::map<std::string, std::string> slice_of;  // blueprint id -> slice id
  std::map<std::string, std::string> tenant_of;  // slice id -> tenant
  std::vector<std::string> link_ids;
  std::vector<DataRecord> records;
  // expected deliveries computed independently of the engine
  std::map<std::string, int> expected_per_importer;
  std::map<std::string, std::vector<DataRecord>> delivered;  // importer slice
  int local_only_deliveries = 0;
  int rule_less_deliveries = 0;
};

void add_check(ScenarioReport& report, const std::string& label, bool pass,
               const std::string& detail = "") {
  report.checks.push_back({label, pass, detail});
}

std::string slice_site(const Orchestrator& orch, const std::string& slice_id) {
  const Slice& slice = orch.slice(slice_id);
  std::string best;
  if (!slice.plan) return best;
  for (const auto& [vf, node] : slice.plan->assignments) {
    const EdgeNode* n = orch.inventory().find_node(node);
    if (n && (best.empty() || n->site_id < best)) best = n->site_id;
  }
  return best;
}

ScenarioContext load_and_run_manifest(const std::string& dir,
                                      ScenarioReport& report) {
  json manifest = json::parse(read_file(dir + "/scenario.json"));
  Inventory inv = parse_inventory_file(
      dir + "/" + manifest.at("inventory").get<std::string>());
  ScenarioContext ctx{Orchestrator(std::move(inv))};

  std::map<std::string, std::string> stream_to_bp;
  std::vector<SliceBlueprint> blueprints;
  for (const auto& file : manifest.at("blueprints")) {
    blueprints.push_back(
        parse_blueprint_file(dir + "/" + file.get<std::string>()));
  }
  for (const auto& bp : blueprints) {
    for (const auto& st : bp.streams) stream_to_bp[st.id] = bp.id;
    std::string id = ctx.orch.submit(bp);
    ctx.orch.process_pending();
    const Slice& slice = ctx.orch.slice(id);
    bool admitted = slice.state == SliceState::ADMITTED;
    add_check(report, "slice " + bp.id + " admitted", admitted,
              admitted ? "" : (slice.reject_reason
                                   ? reject_reason_name(*slice.reject_reason)
                                   : "not processed"));
    if (!admitted) continue;
    ctx.orch.instantiate(id);
    add_check(report, "slice " + bp.id + " active",
              ctx.orch.slice(id).state == SliceState::ACTIVE);
    ctx.slice_of[bp.id] = id;
    ctx.tenant_of[id] = bp.tenant_id;
  }

  if (manifest.contains("delegations")) {
    for (const auto& d : manifest.at("delegations")) {
      DelegationGrant grant;
      grant.grantor = d.at("grantor").get<std::string>();
      grant.grantee = d.at("grantee").get<std::string>();
      for (const auto& s : d.at("scope")) {
        grant.scope.insert(s.get<std::string>());
      }
      for (const auto& a : d.at("actions")) {
        grant.actions.insert(grant_action_from_name(a.get<std::string>()));
      }
      grant.expiry = d.at("expiry").get<LogicalTime>();
      ctx.orch.delegate(grant);
    }
  }

  struct LinkSpec {
    std::string exporter_bp;
    std::string importer_bp;
  };
  std::map<std::string, LinkSpec> link_specs;
  if (manifest.contains("federations")) {
    for (const auto& f : manifest.at("federations")) {
      std::string exporter_bp = f.at("exporter").get<std::string>();
      std::string importer_bp = f.at("importer").get<std::string>();
      std::vector<SFIRule> rules =
          sfi_rules_from_json(f.at("rules"), "/rules");
      const std::string& exporter_slice = ctx.slice_of.at(exporter_bp);
      const std::string& importer_slice = ctx.slice_of.at(importer_bp);
      FederationLink& link = ctx.orch.create_federation(
          exporter_slice, importer_slice, rules,
          ctx.tenant_of.at(exporter_slice));
      ctx.orch.consent_federation(link.id, ctx.tenant_of.at(exporter_slice));
      ctx.orch.consent_federation(link.id, ctx.tenant_of.at(importer_slice));
      add_check(report, "federation " + exporter_bp + "->" + importer_bp +
                            " active",
                link.state == FederationState::ACTIVE);
      ctx.link_ids.push_back(link.id);
      link_specs[link.id] = {exporter_bp, importer_bp};
    }
  }

  if (manifest.contains("records")) {
    json rec_doc = json::parse(
        read_file(dir + "/" + manifest.at("records").get<std::string>()));
    for (std::size_t i = 0; i < rec_doc.at("records").size(); ++i) {
      DataRecord record = record_from_json(
          rec_doc.at("records")[i], "/records/" + std::to_string(i));
      auto bp_it = stream_to_bp.find(record.stream_id);
      if (bp_it == stream_to_bp.end()) {
        throw ValidationError("/records/" + std::to_string(i),
                              "stream not declared by any blueprint");
      }
      record.slice_id = ctx.slice_of.at(bp_it->second);
      ctx.records.push_back(std::move(record));
    }

    // Independent expectation: a record reaches an importer iff some link
    // from its producing slice to that importer carries a rule for its
    // stream and the record is not LOCAL_ONLY.
    for (const auto& record : ctx.records) {
      for (const auto& link_id : ctx.link_ids) {
        const FederationLink* link = ctx.orch.federation().find_link(link_id);
        if (link->exporter_slice_id != record.slice_id) continue;
        bool has_rule = false;
        for (const auto& rule : link->rules) {
          if (rule.stream_id == record.stream_id) has_rule = true;
        }
        if (has_rule && record.sensitivity != Sensitivity::LOCAL_ONLY) {
          ctx.expected_per_importer[link->importer_slice_id] += 1;
        }
      }
    }

    // Offer every record to every link; only matching ACTIVE links with a
    // rule may deliver.
    for (const auto& record : ctx.records) {
      for (const auto& link_id : ctx.link_ids) {
        const FederationLink* link = ctx.orch.federation().find_link(link_id);
        FlowDecision decision = ctx.orch.federation().evaluate_flow(
            link_id, record, ctx.orch.now());
        if (decision.verdict != FlowVerdict::PASS) continue;
        ctx.delivered[link->importer_slice_id].push_back(*decision.record);
        if (record.sensitivity == Sensitivity::LOCAL_ONLY) {
          ctx.local_only_deliveries += 1;
        }
        bool has_rule = false;
        for (const auto& rule : link->rules) {
          if (rule.stream_id == record.stream_id) has_rule = true;
        }
        if (!has_rule || link->exporter_slice_id != record.slice_id) {
          ctx.rule_less_deliveries += 1;
        }
      }
    }
  }
  return ctx;
}

ScenarioReport run_monitoring(const std::string& dir) {
  ScenarioReport report;
  report.name = "monitoring";
  ScenarioContext ctx = load_and_run_manifest(dir, report);

  // 2 product companies, 3 manufacturers, one manufacturer shared.
  add_check(report, "five slices active", ctx.slice_of.size() == 5);
  add_check(report, "four federations", ctx.link_ids.size() == 4);

  const std::string ipca = ctx.slice_of.at("bp-ipca-mon");
  const std::string ipcb = ctx.slice_of.at("bp-ipcb-mon");
  int leakage = 0;
  for (const auto& record : ctx.delivered[ipcb]) {
    if (record.stream_id != "cm2-ipc-b-quality") leakage += 1;
  }
  std::set<std::string> ipca_streams{"cm1-ipc-a-quality", "cm2-ipc-a-quality",
                                     "cm3-ipc-a-quality"};
  for (const auto& record : ctx.delivered[ipca]) {
    if (!ipca_streams.count(record.stream_id)) leakage += 1;
  }
  add_check(report, "cross-company leakage", leakage == 0,
            "leaked=" + std::to_string(leakage));
  add_check(report, "no LOCAL_ONLY exports", ctx.local_only_deliveries == 0);
  add_check(report, "no delivery without matching rule",
            ctx.rule_less_deliveries == 0);
  int redact_violations = 0;
  for (const auto& [importer, records] : ctx.delivered) {
    for (const auto& record : records) {
      if (record.fields.count("recipe")) redact_violations += 1;
    }
  }
  add_check(report, "recipe fields redacted", redact_violations == 0);
  for (const auto& [importer, expected] : ctx.expected_per_importer) {
    add_check(report,
              "delivery count to " + importer + " = " +
                  std::to_string(expected),
              static_cast<int>(ctx.delivered[importer].size()) == expected,
              "got " + std::to_string(ctx.delivered[importer].size()));
  }
  add_check(report, "invariants hold", ctx.orch.check_invariants().empty());
  report.notes.push_back("deliveries to " + ipca + ": " +
                         std::to_string(ctx.delivered[ipca].size()));
  report.notes.push_back("deliveries to " + ipcb + ": " +
                         std::to_string(ctx.delivered[ipcb].size()));
  return report;
}

ScenarioReport run_maintenance(const std::string& dir) {
  ScenarioReport report;
  report.name = "maintenance";
  ScenarioContext ctx = load_and_run_manifest(dir, report);

  add_check(report, "three slices active", ctx.slice_of.size() == 3);
  add_check(report, "two federations", ctx.link_ids.size() == 2);

  // Vendor holds delegated maintenance rights on the press it sold.
  add_check(report, "vendor authorized MAINTAIN on delegated equipment",
            ctx.orch.authorize("iev_a", GrantAction::MAINTAIN, "eq-pm1-press"));
  add_check(report, "vendor not authorized on undelegated equipment",
            !ctx.orch.authorize("iev_a", GrantAction::MAINTAIN,
                                "eq-pm2-press"));

  std::map<std::string, std::vector<DataRecord>> per_link;
  std::map<std::string, std::string> site_of_link;
  for (const auto& link_id : ctx.link_ids) {
    const FederationLink* link = ctx.orch.federation().find_link(link_id);
    for (const auto& record : ctx.records) {
      if (record.slice_id == link->exporter_slice_id) {
        per_link[link_id].push_back(record);
      }
    }
    site_of_link[link_id] = slice_site(ctx.orch, link->exporter_slice_id);
  }
  std::vector<DataRecord> merged = ctx.orch.federation().merge_streams(
      ctx.link_ids, per_link, site_of_link, ctx.orch.now());

  int expected = 0;
  for (const auto& [importer, n] : ctx.expected_per_importer) expected += n;
  add_check(report,
            "merged length = permitted union (" + std::to_string(expected) +
                ")",
            static_cast<int>(merged.size()) == expected,
            "got " + std::to_string(merged.size()));
  bool ordered = true;
  for (std::size_t i = 1; i < merged.size(); ++i) {
    if (merged[i - 1].timestamp > merged[i].timestamp) ordered = false;
  }
  add_check(report, "merged output timestamp-ordered", ordered);
  int local_only = 0;
  for (const auto& record : merged) {
    if (record.sensitivity == Sensitivity::LOCAL_ONLY) local_only += 1;
  }
  add_check(report, "no LOCAL_ONLY in merge", local_only == 0);
  add_check(report, "invariants hold", ctx.orch.check_invariants().empty());
  report.notes.push_back("merged records: " + std::to_string(merged.size()));
  return report;
}

ScenarioReport run_sfaas(const std::string& dir) {
  ScenarioReport report;
  report.name = "sfaas";
  json manifest = json::parse(read_file(dir + "/scenario.json"));
  Inventory inv = parse_inventory_file(
      dir + "/" + manifest.at("inventory").get<std::string>());
  Orchestrator orch(std::move(inv));

  std::string snapshot_before = orch.snapshot_json();

  SliceBlueprint bp = parse_blueprint_file(
      dir + "/" + manifest.at("blueprints")[0].get<std::string>());
  std::string id = orch.submit(bp);
  orch.process_pending();
  const Slice& slice = orch.slice(id);
  add_check(report, "blueprint admitted", slice.state == SliceState::ADMITTED,
            slice.reject_reason ? reject_reason_name(*slice.reject_reason)
                                : "");
  if (slice.state != SliceState::ADMITTED) return report;
  orch.instantiate(id);
  add_check(report, "slice active", orch.slice(id).state == SliceState::ACTIVE);
  std::size_t assignments_before = orch.slice(id).plan->assignments.size();

  ReconfigureDelta delta = delta_from_json(json::parse(
      read_file(dir + "/" + manifest.at("delta").get<std::string>())));
  ReconfigureOutcome outcome = orch.reconfigure(id, delta, bp.tenant_id);
  add_check(report, "reconfigure (one VF added) succeeds", outcome.ok,
            outcome.detail);
  add_check(report, "one more assignment after reconfigure",
            orch.slice(id).plan->assignments.size() ==
                assignments_before + 1);
  add_check(report, "slice active after reconfigure",
            orch.slice(id).state == SliceState::ACTIVE);
  add_check(report, "invariants hold mid-lifecycle",
            orch.check_invariants().empty());

  orch.terminate(id, bp.tenant_id);
  add_check(report, "slice terminated",
            orch.slice(id).state == SliceState::TERMINATED);
  std::string snapshot_after = orch.snapshot_json();
  add_check(report, "final snapshot equals initial snapshot",
            snapshot_after == snapshot_before);
  add_check(report, "invariants hold", orch.check_invariants().empty());
  return report;
}

}  // namespace

std::string ScenarioReport::to_text() const {
  std::ostringstream os;
  os << "scenario " << name << "\n";
  for (const auto& c : checks) {
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.label;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  for (const auto& n : notes) os << "  note: " << n << "\n";
  os << (ok() ? "OK" : "FAILED") << "\n";
  return os.str();
}

ScenarioReport run_scenario(const std::string& name,
                            const std::string& fixtures_dir) {
  const std::string dir = fixtures_dir + "/scenarios/" + name;
  if (name == "monitoring") return run_monitoring(dir);
  if (name == "maintenance") return run_maintenance(dir);
  if (name == "sfaas") return run_sfaas(dir);
  throw ValidationError(
      name, "unknown scenario (expected monitoring, maintenance or sfaas)");
}

}  // namespace slicenet
