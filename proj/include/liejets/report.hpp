#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace liejets {

struct CheckResult {
  std::string name;
  bool passed = false;
  int certified_order = -1;  // -1 when not applicable
  std::string witness;       // empty unless there is something to show
};

struct Report {
  std::string subject;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  void add(const std::string& name, bool passed, int certified_order = -1,
           const std::string& witness = "") {
    checks.push_back({name, passed, certified_order, witness});
  }

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e;
      e["name"] = c.name;
      e["status"] = c.passed ? "pass" : "fail";
      if (c.certified_order >= 0) e["certified_order"] = c.certified_order;
      if (!c.witness.empty()) e["witness"] = c.witness;
      arr.push_back(e);
    }
    nlohmann::json j;
    j["schema"] = "liejets-report/1";
    j["subject"] = subject;
    j["seed"] = seed;
    j["passed"] = all_passed();
    j["checks"] = arr;
    return j;
  }

  std::string text_summary() const {
    std::string out;
    for (const auto& c : checks) {
      out += c.passed ? "[PASS] " : "[FAIL] ";
      out += c.name;
      if (c.certified_order >= 0)
        out += " (certified order " + std::to_string(c.certified_order) + ")";
      if (!c.passed && !c.witness.empty()) out += "\n       witness: " + c.witness;
      out += "\n";
    }
    return out;
  }
};

}  // namespace liejets
