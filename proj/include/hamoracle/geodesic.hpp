#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hamoracle/interrogation.hpp"

// Geodesics of ds^2 = (4/pi^2)(d theta^2 + tan^2 theta d phi^2) on the
// octant a = (sin t cos p, cos t, sin t sin p) of S^2.

namespace hamoracle::geodesic {

struct PolarPoint {
  double theta = 0.0;
  double phi = 0.0;
};

struct Velocity {
  double theta = 0.0;
  double phi = 0.0;
};

struct ArcSample {
  double t = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double theta_dot = 0.0;
  double phi_dot = 0.0;
};

// Closed-form unit-speed geodesic leaving the equator at phi = 0, t = 0,
// with apex height theta0 reached at t = cos(theta0).
struct GeodesicArc {
  double theta0 = 0.0;
  int sign_theta = 1;  // +1: heads north (theta decreasing) first
  int sign_phi = 1;    // +1: phi increasing
  double t_begin = 0.0;
  double t_end = 0.0;

  ArcSample evaluate(double t) const;
};

std::array<double, 3> sphere_point(double theta, double phi);

// sqrt(g_tt v_t^2 + g_pp v_p^2).
double metric_speed(PolarPoint p, double v_theta, double v_phi);

struct Christoffel {
  double theta_phiphi = 0.0;  // -sin / cos^3
  double phi_thetaphi = 0.0;  // 1 / (sin cos), equal to phi_phitheta
};

Christoffel christoffel(double theta);

struct IntegrationResult {
  std::vector<ArcSample> samples;
  bool hit_boundary = false;
  double max_speed_drift = 0.0;
};

// Fixed-step RK4 of theta'' = (sin/cos^3) phi'^2,
// phi'' = -2 theta' phi' / (sin cos). Steps are subdivided where the
// phi' equation is stiff (close to the equator).
IntegrationResult geodesic_integrate(PolarPoint p0, Velocity v0, double t_total, double dt);

// cos(theta(t)) = cos(theta0) sin(pi t / (2 cos theta0)), 0 <= t <= 2 cos theta0.
double theta_of_t(double t, double theta0);

enum class Branch { ascending, descending };

// (pi/2)(1 - sin theta0).
double apex_phi_increase(double theta0);

double phi_of_theta(double theta, double theta0, Branch branch);

// phi_ascending(theta) <= (1 - sin theta0) arcsin(cos theta / cos theta0).
bool ascent_bound_check(double theta, double theta0);

struct SolveOptions {
  double target_phi = kPi / 4.0;
  double target_theta = kPi / 4.0;
  double scan_lo = 0.60;
  double scan_hi = 0.95;
  double scan_step = 1e-3;
  double residual_tol = 1e-12;
};

struct Theta0Solution {
  double cos_theta0 = 0.0;
  double theta0 = 0.0;
  double residual = 0.0;
  std::vector<std::pair<double, double>> scan;
};

// Root in cos(theta0) of 2 dphi_apex - phi_ascending(target_theta) - target_phi.
double theta0_residual(double cos_theta0, const SolveOptions& opts = {});
Theta0Solution solve_theta0(const SolveOptions& opts = {});

// 2 cos(theta0) (1 - arcsin(cos(theta) / cos(theta0)) / pi).
double arrival_time(double cos_theta0, double theta_target = kPi / 4.0);

double min_time_n2();

// The optimal arc from the equator to the zero-error point.
GeodesicArc optimal_arc();

// Piecewise-constant controls following the optimal arc, evaluated at
// segment midpoints: b0 = 1, c1 = -w1, b1 = -w2, c2 = 1.
interrogation::Schedule optimal_schedule_n2(int segments);

// Controls (w1, w2) = (-b0 c1, -b1 c2) realizing the arc velocity at t.
std::pair<double, double> arc_controls(const GeodesicArc& arc, double t);

struct FidelityCheck {
  double max_deviation = 0.0;
  double max_speed_error = 0.0;
  double max_clairaut_error = 0.0;
  std::size_t steps = 0;
};

// Integrates the optimal arc from theta = pi/2 - eps and compares it with
// the closed form.
FidelityCheck integrator_fidelity(double dt, double eps = 1e-6);

// Rows (t, theta, phi, a0, a1, a2) along the optimal arc every dt, plus
// the arrival time.
std::vector<std::array<double, 6>> trace_rows(double dt);

}  // namespace hamoracle::geodesic
