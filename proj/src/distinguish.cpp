#include <algorithm>
#include <cmath>

#include "hamoracle/oracle_core.hpp"

namespace hamoracle::core {

double hull_gap_excess(const std::vector<double>& gaps, double t) {
  const double two_pi = 2.0 * kPi;
  std::vector<double> ang;
  ang.reserve(gaps.size());
  for (double d : gaps) {
    double a = std::fmod(-d * t, two_pi);
    if (a < 0.0) a += two_pi;
    ang.push_back(a);
  }
  std::sort(ang.begin(), ang.end());
  double widest = two_pi - (ang.back() - ang.front());
  for (std::size_t i = 1; i < ang.size(); ++i) widest = std::max(widest, ang[i] - ang[i - 1]);
  return widest - kPi;
}

namespace {

double bisect_first(const std::vector<double>& d, double lo, double hi, double slack, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (hull_gap_excess(d, mid) - slack <= 0.0) hi = mid;
    else lo = mid;
  }
  return hi;
}

// Golden-section minimisation of the gap excess on [lo, hi].
std::pair<double, double> golden_min(const std::vector<double>& d, double lo, double hi, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = hull_gap_excess(d, x1), f2 = hull_gap_excess(d, x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = hull_gap_excess(d, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = hull_gap_excess(d, x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, hull_gap_excess(d, x)};
}

}  // namespace

std::optional<double> min_distinguish_time(const std::vector<double>& delta0, const std::vector<double>& delta1,
                                           const DistinguishOptions& opts) {
  if (delta0.empty() || delta1.empty()) throw std::invalid_argument("phase vectors must be non-empty");
  if (delta0.size() != delta1.size()) throw std::invalid_argument("phase vectors differ in length");
  std::vector<double> d(delta0.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = delta1[k] - delta0[k];
  const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
  const double spread = *mx - *mn;
  if (spread <= 0.0) return std::nullopt;

  const double h = opts.scan_step;
  const double slack = opts.hull_slack;
  auto g = [&](double t) { return hull_gap_excess(d, t) - slack; };
  const long n = static_cast<long>(std::floor(opts.t_max / h + 1e-9));
  double g_prev = g(0.0);
  double g_cur = g(h);
  for (long i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * h;
    if (g_cur <= 0.0) return bisect_first(d, t - h, t, slack, opts.tolerance);
    const double g_next = g(t + h);
    // A tangential touch of pi can fall between grid points; the excess
    // is Lipschitz with constant `spread`, so only grid minima within
    // spread * h of zero need refinement.
    if (g_cur <= g_prev && g_cur <= g_next && g_cur <= spread * h) {
      const auto [tm, gm] = golden_min(d, t - h, t + h, 0.1 * opts.tolerance);
      if (gm - slack <= spread * opts.tolerance) {
        if (gm - slack < -spread * opts.tolerance) return bisect_first(d, t - h, tm, slack, opts.tolerance);
        if (tm <= opts.t_max) return tm;
      }
    }
    g_prev = g_cur;
    g_cur = g_next;
  }
  return std::nullopt;
}

}  // namespace hamoracle::core
