#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fillrad::suite {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

/// Runs every acceptance scenario end to end. When out_dir is nonempty the
/// sample/estimate/report artifacts are written there (circle, sphere2,
/// torus, rp2, quotient).
SuiteResult run_acceptance(const std::filesystem::path& out_dir);

}  // namespace fillrad::suite
