#include "hamoracle/interrogation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hamoracle::interrogation {

namespace {

void require_bits(int n) {
  if (n < 1) throw std::invalid_argument("need n >= 1 bits");
}

double log_binomial_fraction(int n, int j) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) - n * std::log(2.0);
}

}  // namespace

void check_admissible(const Segment& s, int n) {
  if (s.b.size() != n + 1 || s.c.size() != n + 1)
    throw std::invalid_argument("control vectors must have n + 1 entries");
  if (!(s.duration >= 0.0)) throw std::invalid_argument("segment duration must be non-negative");
  for (int j = 0; j <= n; ++j)
    if (s.b(j) * s.b(j) + s.c(j) * s.c(j) > 1.0 + kAdmissibleSlack)
      throw std::domain_error("control constraint b_j^2 + c_j^2 <= 1 violated at j = " + std::to_string(j));
}

double total_duration(const Schedule& s) {
  double t = 0.0;
  for (const Segment& seg : s) t += seg.duration;
  return t;
}

Schedule constant_schedule(const Controls& c, double horizon, int segments) {
  if (segments < 1) throw std::invalid_argument("segments must be >= 1");
  Schedule s(segments, Segment{horizon / segments, c.b, c.c});
  return s;
}

RVector target_vector(int n) {
  require_bits(n);
  RVector a(n + 1);
  for (int j = 0; j <= n; ++j) a(j) = std::exp(0.5 * log_binomial_fraction(n, j));
  return a;
}

RVector initial_vector(int n) {
  require_bits(n);
  RVector a = RVector::Zero(n + 1);
  a(0) = 1.0;
  return a;
}

double pwin_interrogation(const RVector& a) {
  const double ip = a.cwiseAbs().dot(target_vector(static_cast<int>(a.size()) - 1));
  return ip * ip;
}

double pwin_xor(const RVector& a) {
  const int n = static_cast<int>(a.size()) - 1;
  double s = 0.0;
  for (int j = 0; 2 * j < n; ++j) s += 2.0 * std::abs(a(j) * a(n - j));
  if (n % 2 == 0) s += a(n / 2) * a(n / 2);
  return 0.5 + 0.5 * s;
}

double pwin(const RVector& a, Objective obj) {
  return obj == Objective::interrogation ? pwin_interrogation(a) : pwin_xor(a);
}

Envelope pwin_upper_envelope(const RVector& a) {
  const int n = static_cast<int>(a.size()) - 1;
  double tail = 0.0;
  for (int j = n / 2; j <= n; ++j) tail += a(j) * a(j);
  Envelope e;
  e.value = 0.5 + std::sqrt(tail);
  e.vacuous = e.value > 1.0;
  e.reported = std::min(1.0, e.value);
  return e;
}

RVector superdiagonal(const RVector& b, const RVector& c) {
  const Eigen::Index n = b.size() - 1;
  RVector w(n);
  for (Eigen::Index j = 0; j < n; ++j) w(j) = -(kPi / 2.0) * b(j) * c(j + 1);
  return w;
}

RMatrix generator(const RVector& b, const RVector& c) {
  const RVector w = superdiagonal(b, c);
  const Eigen::Index n = w.size();
  RMatrix m = RMatrix::Zero(n + 1, n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j + 1) = w(j);
    m(j + 1, j) = -w(j);
  }
  return m;
}

RMatrix segment_propagator(const RVector& b, const RVector& c, double tau) {
  return expm_antisymmetric(generator(b, c) * tau);
}

RVector final_state(const RVector& a0, const Schedule& s) {
  const int n = static_cast<int>(a0.size()) - 1;
  RVector a = a0;
  for (const Segment& seg : s) {
    check_admissible(seg, n);
    if (seg.duration > 0.0) a = segment_propagator(seg.b, seg.c, seg.duration) * a;
  }
  return a;
}

std::vector<SphereState> evolve_reduced(const SphereState& s, const Schedule& schedule, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const int n = s.n_bits();
  require_bits(n);
  if (std::abs(s.a.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state not on the unit sphere");
  for (const Segment& seg : schedule) check_admissible(seg, n);

  std::vector<double> edges{0.0};
  for (const Segment& seg : schedule) edges.push_back(edges.back() + seg.duration);
  const double total = edges.back();

  std::vector<SphereState> out{{s.a, s.t}};
  RVector a = s.a;
  double t = 0.0;
  std::size_t seg = 0;
  for (long k = 1; t < total; ++k) {
    double t_next = static_cast<double>(k) * dt;
    if (t_next >= total - 1e-12 * std::max(1.0, total)) t_next = total;
    while (t < t_next) {
      while (seg + 1 < edges.size() - 1 && edges[seg + 1] <= t) ++seg;
      const double end = std::min(t_next, edges[seg + 1]);
      const double tau = end - t;
      if (tau > 0.0) a = segment_propagator(schedule[seg].b, schedule[seg].c, tau) * a;
      t = end;
      if (t >= edges[seg + 1] && seg + 1 < edges.size() - 1) ++seg;
    }
    out.push_back({a, s.t + t});
  }
  return out;
}

double discrete_achievable_pwin(int n, int t, Objective obj) {
  require_bits(n);
  if (t < 0) throw std::invalid_argument("query count must be non-negative");
  if (obj == Objective::parity) return 2 * t >= n ? 1.0 : 0.5;
  if (t >= n) return 1.0;
  double s = 0.0;
  for (int j = 0; j <= t; ++j) s += std::exp(log_binomial_fraction(n, j));
  return std::min(1.0, s);
}

int van_dam_query_count(int n, double target) {
  require_bits(n);
  if (!(target > 0.5) || !(target < 1.0)) throw std::invalid_argument("target must lie in (1/2, 1)");
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    s += std::exp(log_binomial_fraction(n, j));
    if (s >= target) return j;
  }
  return n;
}

double lower_bound_envelope(int n, double t, int j) {
  if (j < 0 || j > n) throw std::invalid_argument("need 0 <= j <= n");
  if (t < 0.0) throw std::invalid_argument("need t >= 0");
  if (j == 0) return 1.0;
  if (t == 0.0) return 0.0;
  return std::exp(j * std::log(kPi * t / 2.0) - std::lgamma(j + 1.0));
}

RVector tail_norms(const RVector& a) {
  RVector tail(a.size());
  double s = 0.0;
  for (Eigen::Index j = a.size() - 1; j >= 0; --j) {
    s += a(j) * a(j);
    tail(j) = std::sqrt(s);
  }
  return tail;
}

LowerBound min_time_lower_bound(int n, double p) {
  if (n < 2) throw std::invalid_argument("lower bound needs n >= 2");
  if (p < 0.5 || p > 1.0) throw std::invalid_argument("pwin must lie in [1/2, 1]");
  const int m = n / 2;
  LowerBound lb;
  lb.asymptotic = n / (kPi * std::exp(1.0));
  const double excess = std::abs(p - 0.5);
  if (excess == 0.0) return lb;
  lb.time = (2.0 / kPi) * std::exp(std::lgamma(m + 1.0) / m) * std::pow(excess, 1.0 / m);
  return lb;
}

}  // namespace hamoracle::interrogation
