#include <doctest.h>

#include <cmath>
#include <random>

#include "hamoracle/control_search.hpp"

using namespace hamoracle;
namespace itr = hamoracle::interrogation;

namespace {

// Best n = 1 value at time T: rotate (1, 0) towards (1, 1)/sqrt(2) at rate pi/2.
double n1_optimum(double t) {
  const double miss = std::max(0.0, kPi / 4.0 - kPi * t / 2.0);
  return std::pow(std::cos(miss), 2);
}

search::SearchConfig small(int n, double horizon) {
  search::SearchConfig c;
  c.n_bits = n;
  c.horizon = horizon;
  c.segments = 10;
  c.restarts = 2;
  c.seed = 7;
  c.tolerance = 1e-6;
  return c;
}

}  // namespace

TEST_CASE("validate_config rejects bad settings") {
  search::SearchConfig c;
  CHECK_NOTHROW(search::validate_config(c));
  auto bad = [](auto mutate) {
    search::SearchConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS(search::validate_config(bad([](auto& c) { c.n_bits = 0; })));
  CHECK_THROWS(search::validate_config(bad([](auto& c) { c.segments = 0; })));
  CHECK_THROWS(search::validate_config(bad([](auto& c) { c.restarts = 0; })));
  CHECK_THROWS(search::validate_config(bad([](auto& c) { c.horizon = 0.0; })));
  CHECK_THROWS(search::validate_config(bad([](auto& c) { c.tolerance = 0.0; })));
  CHECK_THROWS(search::optimize_controls(bad([](auto& c) { c.segments = -1; })));
}

TEST_CASE("uniform split schedule is admissible") {
  for (int n = 1; n <= 6; ++n) {
    const itr::Schedule s = search::uniform_split_schedule(n, 1.0, 4);
    CHECK(s.size() == 4);
    CHECK(itr::total_duration(s) == doctest::Approx(1.0));
    for (const auto& seg : s) CHECK_NOTHROW(itr::check_admissible(seg, n));
  }
}

TEST_CASE("n = 1 rediscovers the closed-form optimum") {
  search::SearchConfig c;
  c.n_bits = 1;
  c.horizon = 0.5;
  c.segments = 20;
  c.restarts = 4;
  c.seed = 1;
  const search::SearchResult r = search::optimize_controls(c);
  CHECK(r.best_pwin >= 1.0 - 1e-4);
  c.horizon = 0.25;
  const search::SearchResult q = search::optimize_controls(c);
  const double bound = itr::pwin_interrogation(RVector{{std::cos(kPi / 8.0), std::sin(kPi / 8.0)}});
  CHECK(bound == doctest::Approx(n1_optimum(0.25)));
  CHECK(q.best_pwin <= bound + 1e-6);
  CHECK(q.best_pwin >= bound - 1e-4);
}

TEST_CASE("random n = 1 schedules never beat the closed-form optimum") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    itr::Schedule s;
    for (int k = 0; k < 4; ++k) {
      itr::Segment seg{0.2 * u(rng), RVector::Zero(2), RVector::Zero(2)};
      seg.b(0) = 2.0 * u(rng) - 1.0;
      seg.c(1) = 2.0 * u(rng) - 1.0;
      s.push_back(seg);
    }
    const double p = itr::pwin_interrogation(itr::final_state(itr::initial_vector(1), s));
    CHECK(p <= n1_optimum(itr::total_duration(s)) + 1e-12);
  }
}

TEST_CASE("results are admissible with a monotone history") {
  search::SearchConfig c = small(3, 1.2);
  const search::SearchResult r = search::optimize_controls(c);
  CHECK(r.best_controls.size() == 10);
  CHECK(itr::total_duration(r.best_controls) == doctest::Approx(1.2));
  for (const auto& seg : r.best_controls) CHECK_NOTHROW(itr::check_admissible(seg, 3));
  REQUIRE_FALSE(r.history.empty());
  for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] >= r.history[k - 1]);
  CHECK(r.restart_pwins.size() == 2);
  double best = 0.0;
  for (double p : r.restart_pwins) best = std::max(best, p);
  CHECK(r.best_pwin == doctest::Approx(best).epsilon(1e-12));
  CHECK(r.best_pwin == doctest::Approx(r.restart_pwins[r.best_restart]).epsilon(1e-12));
  CHECK(r.history.back() == doctest::Approx(best).epsilon(1e-12));
  CHECK(r.evaluations > 0);
  // Restart 0 starts from the uniform split and can only improve on it.
  const double base = itr::pwin_interrogation(
      itr::final_state(itr::initial_vector(3), search::uniform_split_schedule(3, 1.2, 10)));
  CHECK(r.restart_pwins[0] >= base - 1e-12);
}

TEST_CASE("optimizer is deterministic for a fixed seed") {
  search::SearchConfig c = small(2, 0.7);
  c.restarts = 4;
  const search::SearchResult a = search::optimize_controls(c);
  const search::SearchResult b = search::optimize_controls(c);
  CHECK(a.best_pwin == b.best_pwin);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.history == b.history);
  REQUIRE(a.best_controls.size() == b.best_controls.size());
  for (std::size_t k = 0; k < a.best_controls.size(); ++k) {
    CHECK(a.best_controls[k].b == b.best_controls[k].b);
    CHECK(a.best_controls[k].c == b.best_controls[k].c);
  }
  c.seed = 8;
  const search::SearchResult d = search::optimize_controls(c);
  CHECK(d.restart_pwins[0] == a.restart_pwins[0]);
  CHECK(d.restart_pwins[1] != a.restart_pwins[1]);
}

TEST_CASE("refining a warm start never loses value") {
  search::SearchConfig c = small(2, 0.8);
  const search::SearchResult coarse = search::optimize_controls(c);
  c.segments = 20;
  c.restarts = 1;
  c.warm_start = coarse.best_controls;
  const search::SearchResult fine = search::optimize_controls(c);
  CHECK(fine.best_pwin >= coarse.best_pwin - 1e-12);
  c.warm_start = search::uniform_split_schedule(3, 0.8, 2);
  CHECK_THROWS(search::optimize_controls(c));
  c.warm_start = itr::Schedule{};
  CHECK_THROWS(search::optimize_controls(c));
}

TEST_CASE("xor objective") {
  search::SearchConfig c = small(2, 0.5);
  c.objective = itr::Objective::parity;
  const search::SearchResult r = search::optimize_controls(c);
  CHECK(r.best_pwin >= 0.5);
  CHECK(r.best_pwin <= 1.0 + 1e-12);
  CHECK(r.best_pwin == doctest::Approx(itr::pwin_xor(itr::final_state(itr::initial_vector(2), r.best_controls))));
}

TEST_CASE("min_time_upper_bound for n = 1 matches the closed form") {
  search::SearchConfig c;
  c.segments = 10;
  c.restarts = 2;
  c.seed = 3;
  const search::UpperBound ub = search::min_time_upper_bound(1, 0.999, c);
  const double exact = 0.5 - (2.0 / kPi) * std::acos(std::sqrt(0.999));
  REQUIRE(ub.found);
  CHECK(ub.lower_bound == 0.0);
  CHECK(ub.upper_bound >= exact - 1e-9);
  CHECK(ub.upper_bound <= exact + 2e-3);
  CHECK(std::abs(ub.upper_bound - 0.5) < 2e-2 + 1e-9);
  CHECK(ub.certificate.best_pwin >= 0.999);
  CHECK_FALSE(ub.probes.empty());
  CHECK(ub.probes.front().first == doctest::Approx(1.0));
}

TEST_CASE("upper bound sandwiches the analytic lower bound") {
  search::SearchConfig c = small(2, 1.0);
  const search::UpperBound ub = search::min_time_upper_bound(2, 0.99, c);
  REQUIRE(ub.found);
  CHECK(ub.upper_bound >= ub.lower_bound - 1e-9);
  CHECK(ub.lower_bound == doctest::Approx(itr::min_time_lower_bound(2, 0.99).time));
  CHECK(ub.certificate.best_pwin >= 0.99);
  CHECK(itr::total_duration(ub.certificate.best_controls) == doctest::Approx(ub.upper_bound));
  const double k = ub.upper_bound / search::kTimeGrid;
  CHECK(std::abs(k - std::round(k)) < 1e-9);
  for (const auto& [t, p] : ub.probes)
    if (t >= ub.upper_bound - 1e-12 && t <= ub.upper_bound + 1e-12) CHECK(p >= 0.99);

  const search::UpperBound ub3 = search::min_time_upper_bound(3, 0.99, small(3, 1.0));
  if (ub3.found) CHECK(ub3.upper_bound >= ub3.lower_bound - 1e-9);
  CHECK(ub3.upper_bound <= 3.0);

  CHECK_THROWS(search::min_time_upper_bound(2, 0.5, c));
  CHECK_THROWS(search::min_time_upper_bound(2, 1.0, c));
}
