#ifndef SLICENET_SCENARIOS_HPP_
#define SLICENET_SCENARIOS_HPP_

#include <string>
#include <vector>

namespace slicenet {

struct ScenarioCheck {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::vector<ScenarioCheck> checks;
  std::vector<std::string> notes;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  std::string to_text() const;
};

// Runs one of the bundled end-to-end scenarios against its fixture files:
//   monitoring  — two product companies remotely monitor three contract
//                 manufacturers, one shared; asserts zero cross-company
//                 record leakage.
//   maintenance — an equipment vendor federates slices across two factory
//                 sites and merges the permitted maintenance records.
//   sfaas       — a product-chain blueprint is admitted, reconfigured and
//                 terminated with exact resource conservation.
// fixtures_dir is the directory holding scenarios/<name>/.
ScenarioReport run_scenario(const std::string& name,
                            const std::string& fixtures_dir);

}  // namespace slicenet

#endif  // SLICENET_SCENARIOS_HPP_
