#pragma once

/// @file acceptance.hpp
/// The acceptance suite: eleven end-to-end criteria, each with a runtime
/// budget. A criterion passes only when its checks hold within budget.

#include <functional>
#include <string>
#include <vector>

namespace heisweil::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool checks_passed = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;
  bool passed() const { return checks_passed && seconds <= budget_seconds; }
};

/// Ids 1..11.
CriterionResult run_criterion(int id);
std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 4 name (1.23 s / 300 s): detail"
std::string format_line(const CriterionResult& r);

}  // namespace heisweil::acceptance
