#include "hamoracle/control_search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hamoracle::search {

namespace {

using interrogation::Schedule;
using interrogation::Segment;

struct Candidate {
  std::vector<RVector> b;
  std::vector<RVector> c;
};

void project(double& b, double& c) {
  const double r2 = b * b + c * c;
  if (r2 > 1.0) {
    const double r = std::sqrt(r2);
    b /= r;
    c /= r;
  }
}

Candidate from_schedule(const Schedule& s, int n, int segments) {
  if (s.empty()) throw std::invalid_argument("warm start is empty");
  Candidate out;
  const double total = interrogation::total_duration(s);
  std::vector<double> edges{0.0};
  for (const Segment& seg : s) edges.push_back(edges.back() + seg.duration);
  for (int k = 0; k < segments; ++k) {
    const double t = (k + 0.5) / segments * total;
    const auto it = std::upper_bound(edges.begin(), edges.end(), t);
    const auto idx = std::min<std::size_t>(s.size() - 1, static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - edges.begin() - 1)));
    RVector b = s[idx].b, c = s[idx].c;
    if (b.size() != n + 1 || c.size() != n + 1) throw std::invalid_argument("warm start has wrong bit count");
    b(n) = 0.0;
    c(0) = 0.0;
    for (int j = 0; j <= n; ++j) project(b(j), c(j));
    out.b.push_back(b);
    out.c.push_back(c);
  }
  return out;
}

Candidate random_candidate(int n, int segments, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Candidate out;
  for (int k = 0; k < segments; ++k) {
    RVector b = RVector::Zero(n + 1), c = RVector::Zero(n + 1);
    b(0) = 2.0 * u(rng) - 1.0;
    c(n) = 2.0 * u(rng) - 1.0;
    for (int j = 1; j < n; ++j) {
      const double r = std::sqrt(u(rng));
      const double ang = 2.0 * kPi * u(rng);
      b(j) = r * std::cos(ang);
      c(j) = r * std::sin(ang);
    }
    out.b.push_back(b);
    out.c.push_back(c);
  }
  return out;
}

Schedule to_schedule(const Candidate& cand, double tau) {
  Schedule s;
  for (std::size_t k = 0; k < cand.b.size(); ++k) s.push_back({tau, cand.b[k], cand.c[k]});
  return s;
}

struct RestartOutcome {
  Candidate best;
  double pwin = 0.0;
  std::vector<double> history;
  long evaluations = 0;
};

RestartOutcome pattern_search(const SearchConfig& cfg, Candidate cand) {
  const int n = cfg.n_bits;
  const int segs = cfg.segments;
  const double tau = cfg.horizon / segs;
  const RVector a0 = interrogation::initial_vector(n);
  auto objective = [&](const RVector& a) { return interrogation::pwin(a, cfg.objective); };

  std::vector<RMatrix> u(segs);
  for (int k = 0; k < segs; ++k) u[k] = interrogation::segment_propagator(cand.b[k], cand.c[k], tau);
  auto final_of = [&]() {
    RVector a = a0;
    for (int k = 0; k < segs; ++k) a = u[k] * a;
    return a;
  };

  RestartOutcome out;
  double best = objective(final_of());
  out.evaluations = 1;
  double step = cfg.initial_step;
  std::vector<RMatrix> after(segs);
  for (int sweep = 0; sweep < cfg.max_sweeps && step >= cfg.tolerance; ++sweep) {
    // after[k] = U_{S-1} ... U_{k+1}
    after[segs - 1] = RMatrix::Identity(n + 1, n + 1);
    for (int k = segs - 2; k >= 0; --k) after[k] = after[k + 1] * u[k + 1];
    bool improved = false;
    RVector f = a0;
    for (int k = 0; k < segs; ++k) {
      for (int coord = 0; coord < 2 * n; ++coord) {
        const bool is_b = coord < n;
        const int j = is_b ? coord : coord - n + 1;
        for (const double dir : {1.0, -1.0}) {
          double bj = cand.b[k](j), cj = cand.c[k](j);
          (is_b ? bj : cj) += dir * step;
          project(bj, cj);
          RVector bb = cand.b[k], cc = cand.c[k];
          bb(j) = bj;
          cc(j) = cj;
          const RMatrix trial = interrogation::segment_propagator(bb, cc, tau);
          const double val = objective(after[k] * (trial * f));
          ++out.evaluations;
          if (val > best + 1e-15) {
            best = val;
            cand.b[k] = bb;
            cand.c[k] = cc;
            u[k] = trial;
            improved = true;
            break;
          }
        }
      }
      f = u[k] * f;
    }
    out.history.push_back(best);
    if (!improved) step *= 0.5;
  }
  out.pwin = objective(final_of());
  out.best = std::move(cand);
  return out;
}

}  // namespace

void validate_config(const SearchConfig& cfg) {
  if (cfg.n_bits < 1) throw std::invalid_argument("n_bits must be >= 1");
  if (cfg.segments < 1) throw std::invalid_argument("segments must be >= 1");
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (!(cfg.horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

Schedule uniform_split_schedule(int n, double horizon, int segments) {
  interrogation::Controls c{RVector::Zero(n + 1), RVector::Zero(n + 1)};
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) c.b(j) = j == 0 ? 1.0 : r;
  for (int j = 1; j <= n; ++j) c.c(j) = j == n ? 1.0 : r;
  return interrogation::constant_schedule(c, horizon, segments);
}

SearchResult optimize_controls(const SearchConfig& cfg) {
  validate_config(cfg);
  const int n = cfg.n_bits;
  std::vector<RestartOutcome> outcomes(cfg.restarts);
  const Candidate first = cfg.warm_start
                              ? from_schedule(*cfg.warm_start, n, cfg.segments)
                              : from_schedule(uniform_split_schedule(n, cfg.horizon, cfg.segments), n, cfg.segments);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < cfg.restarts; ++r) {
    Candidate start;
    if (r == 0) {
      start = first;
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      start = random_candidate(n, cfg.segments, rng);
    }
    outcomes[r] = pattern_search(cfg, std::move(start));
  }

  SearchResult res;
  double running = -1.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    const RestartOutcome& o = outcomes[r];
    res.restart_pwins.push_back(o.pwin);
    res.evaluations += o.evaluations;
    if (r == 0 || o.pwin > res.best_pwin) {
      res.best_pwin = o.pwin;
      res.best_restart = r;
    }
    for (double h : o.history) {
      running = std::max(running, h);
      res.history.push_back(running);
    }
  }
  const RestartOutcome& best = outcomes[res.best_restart];
  res.best_controls = to_schedule(best.best, cfg.horizon / cfg.segments);
  res.best_pwin = interrogation::pwin(interrogation::final_state(interrogation::initial_vector(n), res.best_controls),
                                      cfg.objective);
  return res;
}

UpperBound min_time_upper_bound(int n, double target_pwin, const SearchConfig& tmpl) {
  if (!(target_pwin > 0.5) || target_pwin > 1.0 - 1e-6) throw std::invalid_argument("target must lie in (1/2, 1 - 1e-6]");
  UpperBound ub;
  ub.target = target_pwin;
  ub.lower_bound = n >= 2 ? interrogation::min_time_lower_bound(n, target_pwin).time : 0.0;
  const double slack = target_pwin > 1.0 - 1e-4 ? 1e-4 : 0.0;
  SearchConfig cfg = tmpl;
  cfg.n_bits = n;
  auto probe = [&](long k) {
    cfg.horizon = static_cast<double>(k) * kTimeGrid;
    SearchResult r = optimize_controls(cfg);
    ub.probes.emplace_back(cfg.horizon, r.best_pwin);
    return r;
  };
  long k_lo = static_cast<long>(std::floor(ub.lower_bound / kTimeGrid));
  long k_hi = static_cast<long>(std::llround(n / kTimeGrid));
  SearchResult top = probe(k_hi);
  if (top.best_pwin < target_pwin - slack) {
    ub.upper_bound = static_cast<double>(n);
    ub.certificate = std::move(top);
    return ub;
  }
  ub.found = true;
  ub.certificate = std::move(top);
  while (k_hi - k_lo > 1) {
    const long mid = k_lo + (k_hi - k_lo) / 2;
    SearchResult r = probe(mid);
    if (r.best_pwin >= target_pwin - slack) {
      k_hi = mid;
      ub.certificate = std::move(r);
    } else {
      k_lo = mid;
    }
  }
  ub.upper_bound = static_cast<double>(k_hi) * kTimeGrid;
  return ub;
}

}  // namespace hamoracle::search
