#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hamoracle/acceptance.hpp"
#include "hamoracle/control_search.hpp"
#include "hamoracle/geodesic.hpp"
#include "hamoracle/grover.hpp"

namespace hamoracle::cli {

namespace itr = interrogation;
using report::ExperimentReport;
using report::Json;

namespace {

struct Flags {
  int n = 0;
  double delta = 1.0;
  double dt = 1e-4;
  std::string mode = "continuous";
  int segments = 0;
  int restarts = 1;
  std::uint64_t seed = 20240601;
  std::optional<std::string> out;
  bool csv = false;

  std::optional<double> horizon;
  std::optional<double> target;
  std::string objective = "interrogation";
  bool solve = false;
  bool full = false;
  bool fidelity = false;
  std::optional<std::string> schedule;
  std::vector<double> phases;
  std::vector<int> only;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--n", f.n, "problem size (items or bits)");
  sub->add_option("--delta", f.delta, "discrete query strength in (0, 1]");
  sub->add_option("--dt", f.dt, "time step")->check(CLI::PositiveNumber);
  sub->add_option("--mode", f.mode, "time model")->check(CLI::IsMember({"discrete", "continuous"}));
  sub->add_option("--segments", f.segments, "piecewise-constant segments");
  sub->add_option("--restarts", f.restarts, "optimizer restarts");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_flag("--csv", f.csv, "also write <name>.csv");
}

itr::Objective objective_of(const std::string& s) {
  return s == "parity" || s == "xor" ? itr::Objective::parity : itr::Objective::interrogation;
}

ExperimentReport grover_report(const Flags& f) {
  const int n = f.n > 0 ? f.n : 4;
  ExperimentReport r("grover");
  r.set_metadata("n", n);
  r.set_metadata("mode", f.mode);
  if (f.mode == "continuous") {
    const double nn = n;
    const grover::FgComparison fg = grover::fg_comparison(n);
    const double independent = nn / (kPi * std::sqrt(nn - 1.0)) * std::atan(std::sqrt(nn - 1.0));
    r.add_check("T", fg.t_optimal, independent, 1e-12 * independent);
    r.add_value("T_fg", fg.t_fg);
    r.add_value("ratio_fg", fg.ratio);
    r.add_value("gap_fg", fg.gap);
    r.set_metadata("dt", f.dt);
    r.set_metadata("splitting", "strang: half-step phase on the first query step, full steps after");
    grover::SimulatedCurve sim;
    const bool brute = n <= 64;
    if (brute) {
      sim = grover::simulate_realized_hamiltonian(n, fg.t_optimal, f.dt);
      r.add_check("x_final", sim.x.back(), 1.0 / nn, 1e-5);
    }
    report::Table t{"x_of_t", {"t", "x_closed_form", "x_simulated"}, {}};
    const std::size_t samples = brute ? sim.t.size() : 1001;
    const std::size_t stride = std::max<std::size_t>(1, samples / 1000);
    for (std::size_t k = 0; k < samples; k += stride) {
      const double tk = brute ? sim.t[k] : fg.t_optimal * static_cast<double>(k) / 1000.0;
      const double xs = brute ? sim.x[k] : NAN;
      t.rows.push_back({tk, grover::continuous_x(tk, n).x, xs});
    }
    r.add_table(std::move(t));
  } else {
    const grover::DiscreteTime d = grover::discrete_exact_time(n, f.delta);
    r.set_metadata("delta", f.delta);
    r.add_value("T", d.time);
    r.add_value("queries", static_cast<double>(d.queries));
    r.add_value("ratio_vs_delta1", d.time / grover::discrete_exact_time(n, 1.0).time);
    const std::vector<double> xs = grover::discrete_trajectory(n, f.delta);
    r.add_check("x_final", xs.back(), 1.0 / n, 1e-12);
    if (n <= 16) {
      const core::AdaptiveRun run = grover::simulate_discrete_optimal(n, f.delta);
      r.add_check("x_final_brute_force", grover::x_of(run.trajectory.back().rho), 1.0 / n, 1e-10);
    }
    report::Table t{"x_per_query", {"query", "t", "x"}, {}};
    for (std::size_t k = 0; k < xs.size(); ++k) t.rows.push_back({double(k), f.delta * double(k), xs[k]});
    r.add_table(std::move(t));
  }
  return r;
}

itr::Schedule default_schedule(int n, int segments) {
  if (n == 2) return geodesic::optimal_schedule_n2(segments > 0 ? segments : 10000);
  itr::Controls c{RVector::Zero(n + 1), RVector::Zero(n + 1)};
  if (n == 1) {
    c.b(0) = 1.0;
    c.c(1) = 1.0;
    return itr::constant_schedule(c, 0.5, segments > 0 ? segments : 1);
  }
  return search::uniform_split_schedule(n, static_cast<double>(n), segments > 0 ? segments : 100);
}

ExperimentReport interrogation_report(const Flags& f) {
  const int n = f.n > 0 ? f.n : 1;
  const itr::Objective obj = objective_of(f.objective);
  ExperimentReport r("interrogation");
  r.set_metadata("n", n);
  r.set_metadata("mode", f.mode);
  r.set_metadata("objective", obj == itr::Objective::parity ? "parity" : "interrogation");
  if (f.mode == "discrete") {
    report::Table t{"pwin_per_queries", {"queries", "pwin_interrogation", "pwin_parity"}, {}};
    for (int q = 0; q <= n; ++q)
      t.rows.push_back({double(q), itr::discrete_achievable_pwin(n, q, itr::Objective::interrogation),
                        itr::discrete_achievable_pwin(n, q, itr::Objective::parity)});
    r.add_check("pwin_interrogation_T_n", itr::discrete_achievable_pwin(n, n, itr::Objective::interrogation), 1.0,
                1e-12);
    r.add_check("pwin_parity_T_half", itr::discrete_achievable_pwin(n, (n + 1) / 2, itr::Objective::parity), 1.0,
                1e-12);
    r.add_table(std::move(t));
    return r;
  }
  const itr::Schedule s = f.schedule ? load_schedule(*f.schedule) : default_schedule(n, f.segments);
  r.set_metadata("splitting", "exact exponential per segment");
  const auto traj = itr::evolve_reduced({itr::initial_vector(n), 0.0}, s, std::max(f.dt, 1e-3));
  const double total = itr::total_duration(s);
  const RVector af = itr::final_state(itr::initial_vector(n), s);
  r.add_value("T", total);
  r.add_value("pwin", itr::pwin(af, obj));
  const itr::Envelope env = itr::pwin_upper_envelope(af);
  r.add_value("pwin_envelope", env.reported);
  if (n >= 2) {
    const itr::LowerBound lb = itr::min_time_lower_bound(n, std::max(0.5, itr::pwin(af, obj)));
    r.add_value("lower_bound_time", lb.time);
    r.add_range_check("time_above_lower_bound", total, lb.time - 1e-9, std::nullopt);
  }
  if (!f.schedule && n <= 2) r.add_range_check("pwin_default_schedule", itr::pwin(af, obj), 1.0 - 1e-3, std::nullopt);
  if (f.full && n <= 3) {
    const itr::FullComparison cmp = itr::verify_reduced_against_full(n, s, f.dt);
    r.add_range_check("full_max_deviation", cmp.max_deviation, std::nullopt, 5e-4);
    r.add_value("full_final_pwin", cmp.final_pwin_full);
  }
  std::vector<std::string> cols{"t"};
  for (int j = 0; j <= n; ++j) cols.push_back("a" + std::to_string(j));
  cols.push_back("pwin");
  report::Table t{"trajectory", cols, {}};
  for (const itr::SphereState& st : traj) {
    std::vector<double> row{st.t};
    for (int j = 0; j <= n; ++j) row.push_back(st.a(j));
    row.push_back(itr::pwin(st.a, obj));
    t.rows.push_back(std::move(row));
  }
  r.add_table(std::move(t));
  return r;
}

ExperimentReport geodesic_report(const Flags& f) {
  ExperimentReport r("geodesic");
  const geodesic::Theta0Solution s = geodesic::solve_theta0();
  const double t = geodesic::arrival_time(s.cos_theta0);
  if (f.solve) {
    r.add_check("cos_theta0", s.cos_theta0, 0.7477, 5e-4);
    r.add_check("T", t, 0.9052, 5e-4);
  } else {
    r.add_value("cos_theta0", s.cos_theta0);
    r.add_value("T", t);
  }
  r.add_value("theta0", s.theta0);
  r.add_value("residual", s.residual);
  if (f.fidelity) {
    const geodesic::FidelityCheck fc = geodesic::integrator_fidelity(1e-5);
    r.add_range_check("integrator_max_deviation", fc.max_deviation, std::nullopt, 1e-8);
    r.add_range_check("integrator_speed_error", fc.max_speed_error, std::nullopt, 1e-8);
    r.add_range_check("integrator_clairaut_error", fc.max_clairaut_error, std::nullopt, 1e-8);
  }
  report::Table tab{"trace", {"t", "theta", "phi", "a0", "a1", "a2"}, {}};
  for (const auto& row : geodesic::trace_rows(std::max(f.dt, 1e-3))) tab.rows.emplace_back(row.begin(), row.end());
  r.add_table(std::move(tab));
  return r;
}

ExperimentReport search_report(const Flags& f) {
  const int n = f.n > 0 ? f.n : 1;
  search::SearchConfig cfg;
  cfg.n_bits = n;
  cfg.segments = f.segments > 0 ? f.segments : 20;
  cfg.restarts = f.restarts;
  cfg.seed = f.seed;
  cfg.objective = objective_of(f.objective);
  ExperimentReport r("search");
  r.set_metadata("n", n);
  r.set_metadata("segments", cfg.segments);
  r.set_metadata("restarts", cfg.restarts);
  r.set_metadata("seed", cfg.seed);
  r.set_metadata("tolerance", cfg.tolerance);
  r.set_metadata("objective", f.objective);
  auto emit = [&](const search::SearchResult& res) {
    r.set_section("controls", schedule_to_json(res.best_controls));
    Json hist = Json::array();
    for (double h : res.history) hist.push_back(report::round_significant(h));
    r.set_section("history", std::move(hist));
    report::Table t{"history", {"sweep", "best_pwin"}, {}};
    for (std::size_t k = 0; k < res.history.size(); ++k) t.rows.push_back({double(k), res.history[k]});
    r.add_table(std::move(t));
  };
  if (f.target) {
    const search::UpperBound ub = search::min_time_upper_bound(n, *f.target, cfg);
    r.add_value("target", *f.target);
    r.add_flag("found", ub.found);
    r.add_value("upper_bound", ub.upper_bound);
    r.add_value("lower_bound", ub.lower_bound);
    r.add_range_check("sandwich_gap", ub.upper_bound - ub.lower_bound, -1e-9, std::nullopt);
    r.add_value("pwin", ub.certificate.best_pwin);
    Json probes = Json::array();
    for (const auto& [t, p] : ub.probes)
      probes.push_back(Json::array({report::round_significant(t), report::round_significant(p)}));
    r.set_section("probes", std::move(probes));
    emit(ub.certificate);
  } else {
    cfg.horizon = f.horizon.value_or(n == 1 ? 0.5 : static_cast<double>(n));
    r.set_metadata("horizon", cfg.horizon);
    const search::SearchResult res = search::optimize_controls(cfg);
    r.add_value("pwin", res.best_pwin);
    r.add_value("best_restart", res.best_restart);
    r.add_value("evaluations", static_cast<double>(res.evaluations));
    emit(res);
  }
  return r;
}

ExperimentReport distinguish_report(const Flags& f) {
  ExperimentReport r("distinguish");
  const std::vector<double> zero{0.0, 0.0, 0.0};
  if (!f.phases.empty()) {
    const auto t = core::min_distinguish_time(std::vector<double>(f.phases.size(), 0.0), f.phases);
    r.add_flag("reachable", t.has_value());
    if (t) r.add_value("t", *t);
    return r;
  }
  r.add_check("t_H", core::min_distinguish_time(zero, {0.0, kPi, kPi}).value_or(NAN), 1.0, 1e-6);
  r.add_check("t_H_prime", core::min_distinguish_time(zero, {0.0, kPi, -kPi}).value_or(NAN), 0.5, 1e-6);
  return r;
}

int finish(const ExperimentReport& r, const Flags& f, std::ostream& out, std::ostream& err) {
  const auto dir = report::resolve_output_dir(f.out);
  const report::WrittenFiles files = report::write_report(r, dir, f.csv);
  for (const report::Scalar& s : r.scalars()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", s.value);
    out << s.name << " = " << buf;
    if (s.pass) out << (*s.pass ? "  [pass]" : "  [FAIL]");
    out << '\n';
  }
  out << "wrote " << files.json.string() << '\n';
  if (files.csv) out << "wrote " << files.csv->string() << '\n';
  const auto failed = r.failures();
  for (const std::string& name : failed) err << "check failed: " << name << '\n';
  return failed.empty() ? 0 : 1;
}

}  // namespace

Json schedule_to_json(const itr::Schedule& s) {
  Json a = Json::array();
  for (const itr::Segment& seg : s)
    a.push_back(Json{{"duration", seg.duration},
                     {"b", std::vector<double>(seg.b.data(), seg.b.data() + seg.b.size())},
                     {"c", std::vector<double>(seg.c.data(), seg.c.data() + seg.c.size())}});
  return a;
}

itr::Schedule schedule_from_json(const Json& j) {
  const Json& arr = j.is_object() ? j.at("controls") : j;
  if (!arr.is_array()) throw std::invalid_argument("schedule must be a JSON array of segments");
  itr::Schedule s;
  for (const Json& e : arr) {
    const auto b = e.at("b").get<std::vector<double>>();
    const auto c = e.at("c").get<std::vector<double>>();
    itr::Segment seg{e.at("duration").get<double>(), Eigen::Map<const RVector>(b.data(), Eigen::Index(b.size())),
                     Eigen::Map<const RVector>(c.data(), Eigen::Index(c.size()))};
    itr::check_admissible(seg, static_cast<int>(b.size()) - 1);
    s.push_back(std::move(seg));
  }
  return s;
}

itr::Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule " + path);
  return schedule_from_json(Json::parse(in));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Hamiltonian and discrete oracle query experiments", "hamoracle"};
  app.require_subcommand(1);

  CLI::App* grover = app.add_subcommand("grover", "optimal Grover search times and curves");
  add_common(grover, f);

  CLI::App* interrogation = app.add_subcommand("interrogation", "reduced interrogation and parity dynamics");
  add_common(interrogation, f);
  interrogation->add_option("--objective", f.objective)->check(CLI::IsMember({"interrogation", "parity", "xor"}));
  interrogation->add_option("--schedule", f.schedule, "schedule JSON file");
  interrogation->add_flag("--full", f.full, "cross-check against the full-space simulator");

  CLI::App* geo = app.add_subcommand("geodesic", "n = 2 time-optimal geodesic");
  add_common(geo, f);
  geo->add_flag("--solve", f.solve, "check the apex solution");
  geo->add_flag("--fidelity", f.fidelity, "check the RK4 integrator against the closed form");

  CLI::App* srch = app.add_subcommand("search", "numerical control optimization");
  add_common(srch, f);
  srch->add_option("--horizon", f.horizon, "total time T")->check(CLI::PositiveNumber);
  srch->add_option("--target", f.target, "bisect for the smallest T reaching this pwin");
  srch->add_option("--objective", f.objective)->check(CLI::IsMember({"interrogation", "parity", "xor"}));

  CLI::App* dist = app.add_subcommand("distinguish", "minimal distinguishing time of Hamiltonian pairs");
  add_common(dist, f);
  dist->add_option("--phases", f.phases, "eigenvalue differences (comma separated)")->delimiter(',');

  CLI::App* all = app.add_subcommand("verify-all", "run the acceptance suite");
  add_common(all, f);
  all->add_option("--only", f.only, "criterion ids")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (all->parsed()) {
      acceptance::Options opts;
      opts.dt = f.dt;
      opts.seed = f.seed;
      opts.only.insert(f.only.begin(), f.only.end());
      const auto results = acceptance::run_all(opts);
      for (const auto& c : results) out << acceptance::summary_line(c) << '\n';
      return finish(acceptance::to_report(results, opts), f, out, err);
    }
    ExperimentReport r = grover->parsed()          ? grover_report(f)
                         : interrogation->parsed() ? interrogation_report(f)
                         : geo->parsed()           ? geodesic_report(f)
                         : srch->parsed()          ? search_report(f)
                                                   : distinguish_report(f);
    r.set_metadata("seed", f.seed);
    return finish(r, f, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hamoracle::cli
