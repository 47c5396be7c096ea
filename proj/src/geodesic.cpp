#include "hamoracle/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hamoracle::geodesic {

namespace {

constexpr double kMetric = 4.0 / (kPi * kPi);

// u = pi/2 - theta keeps full relative precision near the equator.
struct State {
  double u, phi, u_dot, phi_dot;
};

State rhs(const State& y) {
  const double su = std::sin(y.u), cu = std::cos(y.u);
  return {y.u_dot, y.phi_dot, -(cu / (su * su * su)) * y.phi_dot * y.phi_dot, 2.0 * y.u_dot * y.phi_dot / (su * cu)};
}

State axpy(const State& y, double h, const State& k) {
  return {y.u + h * k.u, y.phi + h * k.phi, y.u_dot + h * k.u_dot, y.phi_dot + h * k.phi_dot};
}

State rk4(const State& y, double h) {
  const State k1 = rhs(y);
  const State k2 = rhs(axpy(y, 0.5 * h, k1));
  const State k3 = rhs(axpy(y, 0.5 * h, k2));
  const State k4 = rhs(axpy(y, h, k3));
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
          y.u_dot + h / 6.0 * (k1.u_dot + 2.0 * k2.u_dot + 2.0 * k3.u_dot + k4.u_dot),
          y.phi_dot + h / 6.0 * (k1.phi_dot + 2.0 * k2.phi_dot + 2.0 * k3.phi_dot + k4.phi_dot)};
}

// Largest local rate of the linearised system.
double stiffness(const State& y) {
  const double su = std::sin(y.u), cu = std::cos(y.u);
  const double l1 = 2.0 * std::abs(y.u_dot) / std::abs(su * cu);
  const double l2 = 2.0 * std::abs(y.phi_dot) * std::abs(cu) / std::abs(su * su * su);
  return std::max(l1, l2);
}

double speed_of(const State& y) {
  const double cot = std::cos(y.u) / std::sin(y.u);
  return std::sqrt(kMetric * (y.u_dot * y.u_dot + cot * cot * y.phi_dot * y.phi_dot));
}

bool in_domain(double theta) { return theta > 0.0 && theta < kPi / 2.0; }

double ascending_phi(double r, double theta0) {
  const double s0 = std::sin(theta0);
  return -s0 * std::asin(r) + std::atan2(s0 * r, std::sqrt(std::max(0.0, 1.0 - r * r)));
}

void require_apex_range(double theta, double theta0) {
  if (!(theta0 > 0.0) || !(theta0 < kPi / 2.0)) throw std::domain_error("apex theta0 must lie in (0, pi/2)");
  if (theta < theta0 - 1e-12 || theta > kPi / 2.0 + 1e-12)
    throw std::domain_error("theta must lie in [theta0, pi/2]");
}

}  // namespace

ArcSample GeodesicArc::evaluate(double t) const {
  const double c0 = std::cos(theta0), s0 = std::sin(theta0);
  const double tb = sign_theta >= 0 ? t : 2.0 * c0 - t;
  const double s = kPi * tb / (2.0 * c0);
  const double ct = c0 * std::sin(s);
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  ArcSample out;
  out.t = t;
  out.theta = std::atan2(st, ct);
  out.theta_dot = -(kPi / 2.0) * std::cos(s) / st;
  out.phi = -(kPi * tb / 2.0) * (s0 / c0) + std::atan2(s0 * std::sin(s), std::cos(s));
  out.phi_dot = (kPi / 2.0) * (s0 / c0) * (ct * ct) / (st * st);
  if (sign_theta < 0) {
    out.theta_dot = -out.theta_dot;
    out.phi_dot = -out.phi_dot;
  }
  if (sign_phi < 0) {
    out.phi = -out.phi;
    out.phi_dot = -out.phi_dot;
  }
  return out;
}

std::array<double, 3> sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi)};
}

double metric_speed(PolarPoint p, double v_theta, double v_phi) {
  if (p.theta >= kPi / 2.0 && v_phi != 0.0) throw std::domain_error("metric diverges on the equator");
  const double tn = p.theta >= kPi / 2.0 ? 0.0 : std::tan(p.theta);
  return std::sqrt(kMetric * (v_theta * v_theta + tn * tn * v_phi * v_phi));
}

Christoffel christoffel(double theta) {
  if (!in_domain(theta)) throw std::domain_error("christoffel needs 0 < theta < pi/2");
  const double s = std::sin(theta), c = std::cos(theta);
  return {-s / (c * c * c), 1.0 / (s * c)};
}

IntegrationResult geodesic_integrate(PolarPoint p0, Velocity v0, double t_total, double dt) {
  if (!(dt > 0.0) || t_total < 0.0) throw std::invalid_argument("need dt > 0 and T >= 0");
  if (!in_domain(p0.theta)) throw std::domain_error("start point outside (0, pi/2)");
  if (std::abs(metric_speed(p0, v0.theta, v0.phi) - 1.0) > 1e-10)
    throw std::invalid_argument("initial speed must be 1 within 1e-10");
  IntegrationResult out;
  State y{kPi / 2.0 - p0.theta, p0.phi, -v0.theta, v0.phi};
  out.samples.push_back({0.0, p0.theta, y.phi, v0.theta, y.phi_dot});
  const auto steps = static_cast<std::size_t>(std::ceil(t_total / dt - 1e-9));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double h = std::min(dt, t_total - t0);
    // Keep h * rate <= 0.01; the phi' equation has rate 2|u'| / (sin u cos u).
    const auto sub = static_cast<std::size_t>(std::clamp(std::ceil(h * stiffness(y) / 0.01), 1.0, 1e7));
    const double hs = h / static_cast<double>(sub);
    for (std::size_t i = 0; i < sub; ++i) y = rk4(y, hs);
    if (!in_domain(kPi / 2.0 - y.u)) {
      out.hit_boundary = true;
      break;
    }
    const double drift = std::abs(speed_of(y) - 1.0);
    out.max_speed_drift = std::max(out.max_speed_drift, drift);
    if (drift > 1e-6) throw std::runtime_error("step too large: speed drift exceeds 1e-6");
    out.samples.push_back({t0 + h, kPi / 2.0 - y.u, y.phi, -y.u_dot, y.phi_dot});
  }
  return out;
}

double theta_of_t(double t, double theta0) {
  const double c0 = std::cos(theta0);
  if (t < -1e-12 || t > 2.0 * c0 + 1e-12) throw std::domain_error("t outside the arc span [0, 2 cos theta0]");
  return GeodesicArc{theta0, 1, 1, 0.0, 2.0 * c0}.evaluate(std::clamp(t, 0.0, 2.0 * c0)).theta;
}

double apex_phi_increase(double theta0) { return (kPi / 2.0) * (1.0 - std::sin(theta0)); }

double phi_of_theta(double theta, double theta0, Branch branch) {
  require_apex_range(theta, theta0);
  const double r = std::min(1.0, std::cos(theta) / std::cos(theta0));
  const double asc = ascending_phi(r, theta0);
  return branch == Branch::ascending ? asc : 2.0 * apex_phi_increase(theta0) - asc;
}

bool ascent_bound_check(double theta, double theta0) {
  require_apex_range(theta, theta0);
  const double r = std::min(1.0, std::cos(theta) / std::cos(theta0));
  return ascending_phi(r, theta0) <= (1.0 - std::sin(theta0)) * std::asin(r) + 1e-12;
}

double theta0_residual(double cos_theta0, const SolveOptions& opts) {
  if (!(cos_theta0 > 0.0) || !(cos_theta0 < 1.0)) return NAN;
  const double r = std::cos(opts.target_theta) / cos_theta0;
  if (r > 1.0) return NAN;
  const double theta0 = std::acos(cos_theta0);
  return 2.0 * apex_phi_increase(theta0) - ascending_phi(r, theta0) - opts.target_phi;
}

Theta0Solution solve_theta0(const SolveOptions& opts) {
  Theta0Solution sol;
  const auto n = static_cast<long>(std::floor((opts.scan_hi - opts.scan_lo) / opts.scan_step + 1e-9));
  double lo = NAN, hi = NAN, flo = NAN;
  for (long i = 0; i <= n; ++i) {
    const double c = opts.scan_lo + static_cast<double>(i) * opts.scan_step;
    const double f = theta0_residual(c, opts);
    sol.scan.emplace_back(c, f);
    if (std::isnan(lo) && !sol.scan.empty() && sol.scan.size() >= 2) {
      const auto [cp, fp] = sol.scan[sol.scan.size() - 2];
      if (!std::isnan(fp) && !std::isnan(f) && (fp == 0.0 || fp * f < 0.0)) {
        lo = cp;
        hi = c;
        flo = fp;
      }
    }
  }
  if (std::isnan(lo)) {
    std::ostringstream msg;
    msg << "solve_theta0: no sign change in [" << opts.scan_lo << ", " << opts.scan_hi << "]; scan:";
    for (std::size_t i = 0; i < sol.scan.size(); i += std::max<std::size_t>(1, sol.scan.size() / 10))
      msg << " (" << sol.scan[i].first << ", " << sol.scan[i].second << ")";
    throw std::runtime_error(msg.str());
  }
  double mid = lo, fm = flo;
  for (int it = 0; it < 200 && std::abs(fm) >= opts.residual_tol; ++it) {
    mid = 0.5 * (lo + hi);
    fm = theta0_residual(mid, opts);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-16) break;
  }
  sol.cos_theta0 = mid;
  sol.theta0 = std::acos(mid);
  sol.residual = fm;
  return sol;
}

double arrival_time(double cos_theta0, double theta_target) {
  return 2.0 * cos_theta0 * (1.0 - std::asin(std::cos(theta_target) / cos_theta0) / kPi);
}

double min_time_n2() { return arrival_time(solve_theta0().cos_theta0); }

GeodesicArc optimal_arc() {
  const Theta0Solution sol = solve_theta0();
  return {sol.theta0, 1, 1, 0.0, arrival_time(sol.cos_theta0)};
}

std::pair<double, double> arc_controls(const GeodesicArc& arc, double t) {
  const ArcSample s = arc.evaluate(t);
  const double w_theta = (2.0 / kPi) * s.theta_dot;
  const double w_phi = (2.0 / kPi) * s.phi_dot * std::tan(s.theta);
  const double w1 = w_theta * std::cos(s.phi) - w_phi * std::sin(s.phi);
  const double w2 = -(w_theta * std::sin(s.phi) + w_phi * std::cos(s.phi));
  return {w1, w2};
}

interrogation::Schedule optimal_schedule_n2(int segments) {
  if (segments < 10) throw std::invalid_argument("optimal_schedule_n2 needs at least 10 segments");
  const GeodesicArc arc = optimal_arc();
  const double h = (arc.t_end - arc.t_begin) / segments;
  interrogation::Schedule out;
  out.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    auto [w1, w2] = arc_controls(arc, arc.t_begin + (i + 0.5) * h);
    const double norm = std::hypot(w1, w2);
    if (norm > 1.0) {
      w1 /= norm;
      w2 /= norm;
    }
    interrogation::Segment seg;
    seg.duration = h;
    seg.b = RVector::Zero(3);
    seg.c = RVector::Zero(3);
    seg.b(0) = 1.0;
    seg.c(1) = -w1;
    seg.b(1) = -w2;
    seg.c(2) = 1.0;
    out.push_back(std::move(seg));
  }
  return out;
}

FidelityCheck integrator_fidelity(double dt, double eps) {
  const GeodesicArc arc = optimal_arc();
  const double c0 = std::cos(arc.theta0);
  const double t_eps = 2.0 * c0 * std::asin(std::sin(eps) / c0) / kPi;
  const ArcSample s0 = arc.evaluate(t_eps);
  const IntegrationResult run =
      geodesic_integrate({s0.theta, s0.phi}, {s0.theta_dot, s0.phi_dot}, arc.t_end - t_eps, dt);
  if (run.hit_boundary) throw std::runtime_error("integrator left the domain on the optimal arc");
  const double clairaut = (kPi / 2.0) * std::tan(arc.theta0);
  FidelityCheck out;
  out.steps = run.samples.size() - 1;
  for (const ArcSample& s : run.samples) {
    const ArcSample ref = arc.evaluate(t_eps + s.t);
    out.max_deviation = std::max({out.max_deviation, std::abs(s.theta - ref.theta), std::abs(s.phi - ref.phi)});
    const double speed = metric_speed({s.theta, s.phi}, s.theta_dot, s.phi_dot);
    out.max_speed_error = std::max(out.max_speed_error, std::abs(speed - 1.0));
    const double tn = std::tan(s.theta);
    out.max_clairaut_error = std::max(out.max_clairaut_error, std::abs(tn * tn * s.phi_dot - clairaut));
  }
  return out;
}

std::vector<std::array<double, 6>> trace_rows(double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const GeodesicArc arc = optimal_arc();
  std::vector<std::array<double, 6>> rows;
  auto push = [&](double t) {
    const ArcSample s = arc.evaluate(t);
    const auto a = sphere_point(s.theta, s.phi);
    rows.push_back({t, s.theta, s.phi, a[0], a[1], a[2]});
  };
  for (long k = 0; static_cast<double>(k) * dt < arc.t_end; ++k) push(static_cast<double>(k) * dt);
  push(arc.t_end);
  return rows;
}

}  // namespace hamoracle::geodesic
