#ifndef SLICENET_JSON_IO_HPP_
#define SLICENET_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "slicenet/emu.hpp"
#include "slicenet/federation.hpp"
#include "slicenet/model.hpp"
#include "slicenet/placement.hpp"

namespace slicenet {

struct ReconfigureDelta;

// All field names are snake_case, exactly as the type definitions. Schema
// violations throw ValidationError with a JSON-pointer path, e.g.
// "/vfs/0/demand/cpu_millicores".

nlohmann::json rv_to_json(const ResourceVector& rv);
ResourceVector rv_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json blueprint_to_json(const SliceBlueprint& bp);
SliceBlueprint blueprint_from_json(const nlohmann::json& j);
SliceBlueprint parse_blueprint_text(const std::string& text);
SliceBlueprint parse_blueprint_file(const std::string& file);
std::string blueprint_to_canonical_text(const SliceBlueprint& bp);

nlohmann::json inventory_to_json(const Inventory& inv);
Inventory inventory_from_json(const nlohmann::json& j);
Inventory parse_inventory_text(const std::string& text);
Inventory parse_inventory_file(const std::string& file);

nlohmann::json plan_to_json(const PlacementPlan& plan);
PlacementPlan plan_from_json(const nlohmann::json& j);

nlohmann::json sfi_rule_to_json(const SFIRule& rule);
SFIRule sfi_rule_from_json(const nlohmann::json& j, const std::string& path);
std::vector<SFIRule> sfi_rules_from_json(const nlohmann::json& j,
                                         const std::string& path);

nlohmann::json delta_to_json(const ReconfigureDelta& delta);
ReconfigureDelta delta_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const DataRecord& record);
DataRecord record_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json params_to_json(const LatencyModelParams& params);
LatencyModelParams params_from_json(const nlohmann::json& j,
                                    const std::string& path);

nlohmann::json instance_to_json(const VFInstance& inst);
VFInstance instance_from_json(const nlohmann::json& j, const std::string& path);

std::string read_file(const std::string& file);
void write_file(const std::string& file, const std::string& content);

}  // namespace slicenet

#endif  // SLICENET_JSON_IO_HPP_
