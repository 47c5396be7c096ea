#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hamoracle/interrogation.hpp"

// Derivative-free search over piecewise-constant admissible controls of
// the reduced interrogation dynamics.

namespace hamoracle::search {

struct SearchConfig {
  int n_bits = 1;
  int segments = 20;
  double horizon = 0.5;
  interrogation::Objective objective = interrogation::Objective::interrogation;
  int restarts = 1;
  std::uint64_t seed = 0;
  // Pattern step at which a restart stops.
  double tolerance = 1e-9;
  double initial_step = 0.5;
  int max_sweeps = 4000;
  // Optional schedule that seeds restart 0 instead of the uniform split;
  // resampled onto the segment grid.
  std::optional<interrogation::Schedule> warm_start;
};

struct SearchResult {
  interrogation::Schedule best_controls;
  double best_pwin = 0.0;
  // Running best after each sweep, restarts concatenated in index order.
  std::vector<double> history;
  std::vector<double> restart_pwins;
  int best_restart = 0;
  long evaluations = 0;
};

void validate_config(const SearchConfig& cfg);

// Admissible baseline: b_0 = c_n = 1, interior b_j = c_j = 1/sqrt(2).
interrogation::Schedule uniform_split_schedule(int n, double horizon, int segments);

// Restarts run in parallel; the merge keeps the best pwin, lowest restart
// index on ties, so results depend only on the seed.
SearchResult optimize_controls(const SearchConfig& cfg);

struct UpperBound {
  bool found = false;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  double target = 0.0;
  SearchResult certificate;
  // (T, best pwin) for every horizon the bisection evaluated.
  std::vector<std::pair<double, double>> probes;
};

inline constexpr double kTimeGrid = 1e-3;

// Smallest T = k * 1e-3 at which optimize_controls reaches target_pwin
// (slack 1e-4 for targets within 1e-4 of 1), searched over
// [min_time_lower_bound, n]. found = false if T = n fails.
UpperBound min_time_upper_bound(int n, double target_pwin, const SearchConfig& tmpl);

}  // namespace hamoracle::search
