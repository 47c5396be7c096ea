#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hamoracle/report.hpp"

// The acceptance suite: eleven criteria, each a set of checks with pinned
// tolerances and, where required, a wall-clock limit.

namespace hamoracle::acceptance {

struct Options {
  double dt = 1e-4;
  std::uint64_t seed = 20240601;
  // Empty runs every criterion.
  std::set<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double runtime_s = 0.0;
  std::optional<double> limit_s;
  report::ExperimentReport checks{"criterion"};
  std::string error;
  bool passed = false;
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const Options& opts);
std::vector<CriterionResult> run_all(const Options& opts = {});

// "[PASS] 3 title (1.23 s): name=value ..." style summary line.
std::string summary_line(const CriterionResult& r);

// All criteria flattened into one report named "verify-all".
report::ExperimentReport to_report(const std::vector<CriterionResult>& results, const Options& opts);

}  // namespace hamoracle::acceptance
