#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chebplan/model.hpp"

namespace chebplan {

// Carries every problem found while parsing/validating a scenario document.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), issues(std::move(problems)) {}

  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid scenario:";
    for (const auto& m : v) s += "\n  " + m;
    return s;
  }
};

// YAML scenario documents. Unknown keys are errors; missing optional keys
// take the documented defaults. Throws ScenarioError listing every issue.
ScenarioConfig parse_scenario(const std::string& yaml_text);
ScenarioConfig load_scenario(const std::string& path);

// Canonical echo with all defaults resolved: fixed key order, shortest
// round-trip numbers. normalize(parse(normalize(x))) == normalize(x).
std::string normalize_scenario(const ScenarioConfig& scn);

}  // namespace chebplan
