#include "hamoracle/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>

#include "hamoracle/control_search.hpp"
#include "hamoracle/geodesic.hpp"
#include "hamoracle/grover.hpp"
#include "hamoracle/interrogation.hpp"
#include "hamoracle/oracle_core.hpp"

namespace hamoracle::acceptance {

namespace {

using report::ExperimentReport;
namespace itr = interrogation;

struct CriterionInfo {
  const char* title;
  std::optional<double> limit_s;
};

const CriterionInfo kCriteria[kCriterionCount] = {
    {"geodesic optimum n=2", 1.0},
    {"grover continuous closed form", 10.0},
    {"farhi-gutmann gap", std::nullopt},
    {"discrete grover", std::nullopt},
    {"interrogation n=1", std::nullopt},
    {"discrete interrogation and parity", std::nullopt},
    {"lower-bound consistency", 60.0},
    {"reduced vs full equivalence", 120.0},
    {"distinguishability anomaly", std::nullopt},
    {"optimizer rediscovery", 600.0},
    {"geodesic integrator fidelity", std::nullopt},
};

void geodesic_optimum(ExperimentReport& r, const Options&) {
  const geodesic::Theta0Solution s = geodesic::solve_theta0();
  r.add_check("cos_theta0", s.cos_theta0, 0.7477, 5e-4);
  r.add_check("T", geodesic::arrival_time(s.cos_theta0), 0.9052, 5e-4);
  r.add_range_check("residual", std::abs(s.residual), std::nullopt, 1e-10);
}

void grover_continuous(ExperimentReport& r, const Options& opts) {
  double worst = 0.0;
  for (std::int64_t n : {2, 3, 4, 16, 1000, 1000000}) {
    const double nn = static_cast<double>(n);
    const double independent = nn / (kPi * std::sqrt(nn - 1.0)) * std::atan(std::sqrt(nn - 1.0));
    worst = std::max(worst, std::abs(grover::continuous_exact_time(n) - independent) / independent);
  }
  r.add_range_check("closed_form_rel_error", worst, std::nullopt, 1e-12);
  const double t4 = grover::continuous_exact_time(4);
  r.add_check("T_N4", t4, 0.769800358919501, 1e-9);
  const grover::SimulatedCurve c = grover::simulate_realized_hamiltonian(4, t4, opts.dt);
  r.add_check("x_final_N4", c.x.back(), 0.25, 1e-5);
}

void farhi_gutmann(ExperimentReport& r, const Options&) {
  r.add_check("ratio_N2", grover::fg_comparison(2).ratio, std::sqrt(2.0), 1e-9);
  const std::pair<std::int64_t, double> cases[] = {{100, 0.10}, {10000, 0.01}, {1000000, 0.001}};
  for (const auto& [n, rel] : cases) {
    const double gap = grover::fg_comparison(n).gap;
    r.add_check("gap_N" + std::to_string(n), gap, 1.0 / kPi, rel / kPi);
  }
}

void discrete_grover(ExperimentReport& r, const Options&) {
  const grover::DiscreteTime d = grover::discrete_exact_time(4, 1.0);
  r.add_check("queries_N4", static_cast<double>(d.queries), 1.0, 0.0);
  r.add_check("time_N4", d.time, 1.0, 1e-12);
  const double delta = 0.25;
  const double ratio = grover::discrete_exact_time(1000000, delta).time / grover::discrete_exact_time(1000000, 1.0).time;
  const double predicted = delta * std::sin(kPi / 2.0) / std::sin(kPi * delta / 2.0);
  r.add_check("speedup_ratio_N1e6", ratio, predicted, 0.01 * predicted);
}

void interrogation_n1(ExperimentReport& r, const Options& opts) {
  itr::Controls c{RVector::Zero(2), RVector::Zero(2)};
  c.b(0) = 1.0;
  c.c(1) = 1.0;
  const auto traj = itr::evolve_reduced({itr::initial_vector(1), 0.0}, itr::constant_schedule(c, 0.5, 1), opts.dt);
  r.add_check("T", traj.back().t, 0.5, 1e-12);
  r.add_range_check("pwin", itr::pwin_interrogation(traj.back().a), 1.0 - 1e-10, std::nullopt);
  r.add_range_check("distance_to_target", (traj.back().a - itr::target_vector(1)).norm(), std::nullopt, 1e-9);
}

void discrete_interrogation(ExperimentReport& r, const Options&) {
  double worst_int = 0.0, worst_xor = 0.0;
  for (int n = 1; n <= 10; ++n) {
    worst_int = std::max(worst_int, std::abs(1.0 - itr::discrete_achievable_pwin(n, n, itr::Objective::interrogation)));
    worst_xor = std::max(worst_xor, std::abs(1.0 - itr::discrete_achievable_pwin(n, (n + 1) / 2, itr::Objective::parity)));
  }
  r.add_range_check("interrogation_T_eq_n_error", worst_int, std::nullopt, 1e-12);
  r.add_range_check("parity_T_eq_ceil_half_error", worst_xor, std::nullopt, 1e-12);
  r.add_range_check("van_dam_256_0.95", itr::van_dam_query_count(256, 0.95), 128.0, 176.0);
}

itr::Schedule random_admissible(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> nseg(1, 12);
  const int segs = nseg(rng);
  const double horizon = 0.1 + (n + 0.5) * u(rng);
  itr::Schedule s;
  for (int k = 0; k < segs; ++k) {
    itr::Segment seg{horizon / segs, RVector::Zero(n + 1), RVector::Zero(n + 1)};
    for (int j = 0; j <= n; ++j) {
      const double rad = std::sqrt(u(rng));
      const double ang = 2.0 * kPi * u(rng);
      seg.b(j) = j < n ? rad * std::cos(ang) : 0.0;
      seg.c(j) = j > 0 ? rad * std::sin(ang) : 0.0;
    }
    s.push_back(std::move(seg));
  }
  return s;
}

void lower_bound_consistency(ExperimentReport& r, const Options& opts) {
  std::mt19937_64 rng(opts.seed);
  for (int n : {2, 3, 5}) {
    double worst = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
      const itr::Schedule s = random_admissible(n, rng);
      for (const itr::SphereState& st : itr::evolve_reduced({itr::initial_vector(n), 0.0}, s, 1e-2)) {
        const RVector tails = itr::tail_norms(st.a);
        for (int j = 1; j <= n; ++j)
          worst = std::max(worst, tails(j) - itr::lower_bound_envelope(n, st.t, j));
      }
    }
    r.add_range_check("envelope_excess_n" + std::to_string(n), worst, std::nullopt, 1e-9);
  }
  r.add_range_check("lb_100_over_n", itr::min_time_lower_bound(100, 2.0 / 3.0).time / 100.0, 0.105, 0.125);
}

void reduced_vs_full(ExperimentReport& r, const Options& opts) {
  itr::Controls c{RVector::Zero(2), RVector::Zero(2)};
  c.b(0) = 1.0;
  c.c(1) = 1.0;
  const itr::FullComparison one = itr::verify_reduced_against_full(1, itr::constant_schedule(c, 0.5, 1), opts.dt);
  r.add_range_check("max_deviation_n1", one.max_deviation, std::nullopt, 5e-4);
  const itr::Schedule geo = geodesic::optimal_schedule_n2(10000);
  const itr::FullComparison two = itr::verify_reduced_against_full(2, geo, opts.dt);
  r.add_range_check("max_deviation_n2", two.max_deviation, std::nullopt, 5e-4);
  const double pwin = itr::pwin_interrogation(itr::final_state(itr::initial_vector(2), geo));
  r.add_range_check("pipeline_pwin_n2", pwin, 1.0 - 1e-3, std::nullopt);
}

void distinguish(ExperimentReport& r, const Options&) {
  const std::vector<double> zero{0.0, 0.0, 0.0};
  const auto h = core::min_distinguish_time(zero, {0.0, kPi, kPi});
  const auto hp = core::min_distinguish_time(zero, {0.0, kPi, -kPi});
  r.add_check("t_H", h.value_or(NAN), 1.0, 1e-6);
  r.add_check("t_H_prime", hp.value_or(NAN), 0.5, 1e-6);
  r.add_flag("identical_unreachable", !core::min_distinguish_time(zero, zero).has_value());
}

void optimizer(ExperimentReport& r, const Options& opts) {
  search::SearchConfig cfg;
  cfg.n_bits = 2;
  cfg.horizon = 0.9052;
  cfg.segments = 200;
  cfg.restarts = 20;
  cfg.seed = opts.seed;
  const search::SearchResult res = search::optimize_controls(cfg);
  r.add_range_check("pwin_T0.9052", res.best_pwin, 0.99, std::nullopt);

  search::SearchConfig tmpl;
  tmpl.segments = 100;
  tmpl.restarts = 4;
  tmpl.seed = opts.seed;
  const search::UpperBound ub = search::min_time_upper_bound(2, 0.999, tmpl);
  r.add_flag("upper_bound_found", ub.found);
  r.add_range_check("upper_bound_n2_0.999", ub.upper_bound, 2.0 / kPi, 0.92);
  r.add_range_check("sandwich_gap", ub.upper_bound - ub.lower_bound, -1e-9, std::nullopt);
}

void integrator(ExperimentReport& r, const Options&) {
  const geodesic::FidelityCheck f = geodesic::integrator_fidelity(1e-5);
  r.add_range_check("max_deviation", f.max_deviation, std::nullopt, 1e-8);
  r.add_range_check("unit_speed_error", f.max_speed_error, std::nullopt, 1e-8);
  r.add_range_check("clairaut_error", f.max_clairaut_error, std::nullopt, 1e-8);
}

using Runner = void (*)(ExperimentReport&, const Options&);
const Runner kRunners[kCriterionCount] = {geodesic_optimum, grover_continuous, farhi_gutmann, discrete_grover,
                                          interrogation_n1, discrete_interrogation, lower_bound_consistency,
                                          reduced_vs_full, distinguish, optimizer, integrator};

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("no criterion " + std::to_string(id));
  CriterionResult out;
  out.id = id;
  out.title = kCriteria[id - 1].title;
  out.limit_s = kCriteria[id - 1].limit_s;
  out.checks = ExperimentReport("criterion_" + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  try {
    kRunners[id - 1](out.checks, opts);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.limit_s) out.checks.add_range_check("runtime_s", out.runtime_s, std::nullopt, *out.limit_s);
  out.passed = out.error.empty() && out.checks.all_pass();
  return out;
}

std::vector<CriterionResult> run_all(const Options& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id)
    if (opts.only.empty() || opts.only.count(id)) out.push_back(run_criterion(id, opts));
  return out;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %2d %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.runtime_s);
  os << head << ':';
  for (const report::Scalar& s : r.checks.scalars()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", s.value);
    os << ' ' << s.name << '=' << buf;
    if (s.pass && !*s.pass) os << "(fail)";
  }
  if (!r.error.empty()) os << " error: " << r.error;
  return os.str();
}

report::ExperimentReport to_report(const std::vector<CriterionResult>& results, const Options& opts) {
  report::ExperimentReport rep("verify-all");
  for (const CriterionResult& c : results) {
    const std::string prefix = "c" + std::to_string(c.id) + ".";
    for (report::Scalar s : c.checks.scalars()) {
      if (s.name == "runtime_s") continue;
      s.name = prefix + s.name;
      rep.add_scalar(std::move(s));
    }
    rep.add_flag(prefix + "passed", c.passed);
  }
  rep.set_metadata("seed", opts.seed);
  rep.set_metadata("dt", opts.dt);
  return rep;
}

}  // namespace hamoracle::acceptance
