#pragma once

// The invariant suite of every module, at its documented sizes.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace menon {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // first counterexample or exception text
  std::chrono::milliseconds elapsed{0};
};

/// Runs all checks in a fixed order; on_result (if set) sees each as it finishes.
std::vector<CheckResult> run_selftest(const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace menon
