#include "slicenet/federation.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "slicenet/errors.hpp"

namespace slicenet {

namespace {

std::string field_value_text(const FieldValue& v) {
  if (std::holds_alternative<double>(v)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", std::get<double>(v));
    return buf;
  }
  return std::get<std::string>(v);
}

}  // namespace

const char* federation_state_name(FederationState s) {
  switch (s) {
    case FederationState::PROPOSED: return "PROPOSED";
    case FederationState::ACTIVE: return "ACTIVE";
    case FederationState::CLOSED: return "CLOSED";
  }
  return "?";
}

FederationLink& FederationEngine::create_link(
    const std::string& exporter_slice, const std::string& importer_slice,
    const std::string& exporter_tenant, const std::string& importer_tenant,
    const std::vector<SFIRule>& rules, const SliceBlueprint& exporter_blueprint,
    LogicalTime now) {
  if (exporter_slice == importer_slice) {
    throw SelfFederationError("slice " + exporter_slice +
                              " cannot federate with itself");
  }
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const SFIRule& rule = rules[i];
    if (!exporter_blueprint.find_stream(rule.stream_id)) {
      std::ostringstream path;
      path << "rules[" << i << "].stream_id";
      throw ValidationError(path.str(), "stream " + rule.stream_id +
                                            " not exported by slice " +
                                            exporter_slice);
    }
    if (rule.transform.kind == TransformKind::REDACT &&
        rule.transform.redact_fields.empty()) {
      std::ostringstream path;
      path << "rules[" << i << "].transform.fields";
      throw ValidationError(path.str(), "REDACT field list must be non-empty");
    }
    if (rule.transform.kind == TransformKind::AGGREGATE &&
        rule.transform.window <= 0) {
      std::ostringstream path;
      path << "rules[" << i << "].transform.window";
      throw ValidationError(path.str(), "window must be > 0");
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fed-%06llu",
                static_cast<unsigned long long>(next_link_++));
  FederationLink link;
  link.id = buf;
  link.exporter_slice_id = exporter_slice;
  link.importer_slice_id = importer_slice;
  link.exporter_tenant = exporter_tenant;
  link.importer_tenant = importer_tenant;
  link.rules = rules;
  audit_note(now, "link " + link.id + " PROPOSED exporter=" + exporter_slice +
                      " importer=" + importer_slice);
  auto [it, inserted] = links_.emplace(link.id, std::move(link));
  return it->second;
}

FederationLink& FederationEngine::consent(const std::string& link_id,
                                          const std::string& tenant,
                                          LogicalTime now) {
  FederationLink* link = find_link(link_id);
  if (!link) throw NotFoundError("unknown federation link " + link_id);
  if (tenant != link->exporter_tenant && tenant != link->importer_tenant) {
    throw UnauthorizedError("tenant " + tenant + " is not a party of " +
                            link_id);
  }
  link->consents.insert(tenant);
  if (link->state == FederationState::PROPOSED &&
      link->consents.count(link->exporter_tenant) &&
      link->consents.count(link->importer_tenant)) {
    link->state = FederationState::ACTIVE;
    audit_note(now, "link " + link->id + " ACTIVE (both consents)" +
                        (link->encrypted ? " encrypted" : ""));
  }
  return *link;
}

std::optional<DataRecord> FederationEngine::apply_transform(
    const std::string& link_id, std::size_t rule_index, const Transform& t,
    const DataRecord& record) {
  switch (t.kind) {
    case TransformKind::PASS:
      return record;
    case TransformKind::REDACT: {
      DataRecord out = record;
      for (const auto& f : t.redact_fields) out.fields.erase(f);
      return out;
    }
    case TransformKind::AGGREGATE: {
      WindowKey key{link_id, rule_index, record.stream_id};
      auto& window = windows_[key];
      window.push_back(record);
      if (static_cast<int>(window.size()) < t.window) return std::nullopt;
      DataRecord out;
      out.stream_id = record.stream_id;
      out.slice_id = record.slice_id;
      out.timestamp = window.back().timestamp;
      out.sequence = ++emitted_[key];
      out.sensitivity = Sensitivity::PUBLIC;
      for (const auto& r : window) {
        if (r.sensitivity == Sensitivity::CONFIDENTIAL) {
          out.sensitivity = Sensitivity::CONFIDENTIAL;
        }
      }
      // Aggregate each numeric field over the window; non-numeric fields
      // are dropped.
      std::map<std::string, std::vector<double>> columns;
      for (const auto& r : window) {
        for (const auto& [name, value] : r.fields) {
          if (std::holds_alternative<double>(value)) {
            columns[name].push_back(std::get<double>(value));
          }
        }
      }
      for (const auto& [name, values] : columns) {
        double v = 0;
        switch (t.function) {
          case AggregateFn::MEAN: {
            double sum = 0;
            for (double x : values) sum += x;
            v = sum / static_cast<double>(values.size());
            break;
          }
          case AggregateFn::MIN:
            v = *std::min_element(values.begin(), values.end());
            break;
          case AggregateFn::MAX:
            v = *std::max_element(values.begin(), values.end());
            break;
          case AggregateFn::COUNT:
            v = static_cast<double>(values.size());
            break;
        }
        out.fields[name] = v;
      }
      window.clear();
      return out;
    }
  }
  return std::nullopt;
}

FlowDecision FederationEngine::evaluate_flow(const std::string& link_id,
                                             const DataRecord& record,
                                             LogicalTime now) {
  auto deny = [&](const std::string& reason) {
    audit_note(now, "link " + link_id + " stream " + record.stream_id +
                        " seq " + std::to_string(record.sequence) + " DENY " +
                        reason);
    return FlowDecision{FlowVerdict::DENY, std::nullopt, reason};
  };

  const FederationLink* link = find_link(link_id);
  if (!link) return deny("UNKNOWN_LINK");
  // LOCAL_ONLY never leaves the producing slice, whatever the rules say.
  if (record.sensitivity == Sensitivity::LOCAL_ONLY) return deny("LOCAL_ONLY");
  if (link->state != FederationState::ACTIVE) return deny("LINK_NOT_ACTIVE");
  if (record.slice_id != link->exporter_slice_id) return deny("WRONG_SLICE");

  // Export-side processing first, then import-side.
  std::vector<std::size_t> pipeline;
  for (FlowDirection dir : {FlowDirection::OUTBOUND, FlowDirection::INBOUND}) {
    for (std::size_t i = 0; i < link->rules.size(); ++i) {
      if (link->rules[i].direction == dir &&
          link->rules[i].stream_id == record.stream_id) {
        pipeline.push_back(i);
        break;  // first matching rule per direction
      }
    }
  }
  if (pipeline.empty()) return deny("NO_RULE");

  DataRecord current = record;
  for (std::size_t idx : pipeline) {
    auto next = apply_transform(link_id, idx, link->rules[idx].transform,
                                current);
    if (!next) {
      return FlowDecision{FlowVerdict::DEFER, std::nullopt, ""};
    }
    current = std::move(*next);
  }
  std::ostringstream fields;
  for (const auto& [name, value] : current.fields) {
    fields << " " << name << "=" << field_value_text(value);
  }
  audit_note(now, "link " + link_id + " stream " + record.stream_id + " seq " +
                      std::to_string(record.sequence) + " PASS" +
                      fields.str());
  return FlowDecision{FlowVerdict::PASS, std::move(current), ""};
}

std::vector<DataRecord> FederationEngine::merge_streams(
    const std::vector<std::string>& link_ids,
    const std::map<std::string, std::vector<DataRecord>>& records_per_link,
    const std::map<std::string, std::string>& exporter_site, LogicalTime now) {
  std::string importer;
  for (const auto& id : link_ids) {
    const FederationLink* link = find_link(id);
    if (!link) throw NotFoundError("unknown federation link " + id);
    if (link->state != FederationState::ACTIVE) {
      throw ValidationError(id, "link not ACTIVE");
    }
    if (importer.empty()) {
      importer = link->importer_slice_id;
    } else if (link->importer_slice_id != importer) {
      throw ValidationError(id, "mixed importers: " + importer + " vs " +
                                    link->importer_slice_id);
    }
  }
  struct Tagged {
    DataRecord record;
    std::string site;
  };
  std::vector<Tagged> passed;
  for (const auto& id : link_ids) {
    auto rec_it = records_per_link.find(id);
    if (rec_it == records_per_link.end()) continue;
    auto site_it = exporter_site.find(id);
    std::string site = site_it == exporter_site.end() ? "" : site_it->second;
    for (const auto& record : rec_it->second) {
      FlowDecision decision = evaluate_flow(id, record, now);
      if (decision.verdict == FlowVerdict::PASS) {
        passed.push_back({std::move(*decision.record), site});
      }
    }
  }
  std::stable_sort(passed.begin(), passed.end(),
                   [](const Tagged& a, const Tagged& b) {
                     if (a.record.timestamp != b.record.timestamp) {
                       return a.record.timestamp < b.record.timestamp;
                     }
                     if (a.site != b.site) return a.site < b.site;
                     return a.record.sequence < b.record.sequence;
                   });
  std::vector<DataRecord> out;
  out.reserve(passed.size());
  for (auto& t : passed) out.push_back(std::move(t.record));
  return out;
}

void FederationEngine::close_links_for_slice(const std::string& slice_id,
                                             LogicalTime now) {
  for (auto& [id, link] : links_) {
    if (link.state == FederationState::CLOSED) continue;
    if (link.exporter_slice_id == slice_id ||
        link.importer_slice_id == slice_id) {
      link.state = FederationState::CLOSED;
      audit_note(now, "link " + id + " CLOSED (slice " + slice_id +
                          " terminating)");
    }
  }
}

FederationLink& FederationEngine::restore_link(FederationLink link) {
  if (link.id.size() > 4 && link.id.rfind("fed-", 0) == 0) {
    std::uint64_t n = std::strtoull(link.id.c_str() + 4, nullptr, 10);
    if (n >= next_link_) next_link_ = n + 1;
  }
  std::string id = link.id;
  return links_[id] = std::move(link);
}

const FederationLink* FederationEngine::find_link(const std::string& id) const {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : &it->second;
}

FederationLink* FederationEngine::find_link(const std::string& id) {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : &it->second;
}

std::string FederationEngine::audit_log_text() const {
  std::string out;
  for (const auto& line : audit_) {
    out += line;
    out += '\n';
  }
  return out;
}

void FederationEngine::audit_note(LogicalTime now, const std::string& note) {
  audit_.push_back(std::to_string(now) + "\t" + note);
}

}  // namespace slicenet
