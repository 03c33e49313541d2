#pragma once

#include <string>
#include <vector>

namespace proxmom {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Named library invariants, cheap enough to run on every install.
std::vector<CheckResult> run_fast_checks();

// Fast checks plus convergence-rate fits and statistical descent checks.
std::vector<CheckResult> run_full_checks();

}  // namespace proxmom
