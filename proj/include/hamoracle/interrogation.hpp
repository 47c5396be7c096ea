#pragma once

#include <vector>

#include "hamoracle/oracle_core.hpp"

// Oracle interrogation and XOR on n hidden bits. The symmetric state is
// described by a = (a_0..a_n) on S^n, a_j^2 being the weight of Hadamard
// basis states of Hamming weight j.

namespace hamoracle::interrogation {

enum class Objective { interrogation, parity };

struct SphereState {
  RVector a;
  double t = 0.0;
  int n_bits() const { return static_cast<int>(a.size()) - 1; }
};

// Controls (b_j, c_j), j = 0..n, with b_j^2 + c_j^2 <= 1. Only b_0..b_{n-1}
// and c_1..c_n enter the dynamics.
struct Controls {
  RVector b;
  RVector c;
};

struct Segment {
  double duration = 0.0;
  RVector b;
  RVector c;
};

using Schedule = std::vector<Segment>;

inline constexpr double kAdmissibleSlack = 1e-12;

// Throws std::domain_error for a b_j^2 + c_j^2 > 1 + 1e-12 or wrong sizes.
void check_admissible(const Segment& s, int n);

double total_duration(const Schedule& s);

// Constant controls over [0, horizon] split into equal segments.
Schedule constant_schedule(const Controls& c, double horizon, int segments);

// sqrt(C(n, j) / 2^n).
RVector target_vector(int n);

// Initial state a = (1, 0, ..., 0).
RVector initial_vector(int n);

// (|a| . a_f)^2.
double pwin_interrogation(const RVector& a);

// 1/2 + 1/2 sum_j a_j a_{n-j}, maximised over sign flips of a.
double pwin_xor(const RVector& a);

double pwin(const RVector& a, Objective obj);

struct Envelope {
  double value = 0.0;     // 1/2 + sqrt(sum_{j >= floor(n/2)} a_j^2)
  double reported = 0.0;  // min(value, 1)
  bool vacuous = false;   // value > 1
};

Envelope pwin_upper_envelope(const RVector& a);

// w_j = -(pi/2) b_j c_{j+1}, j = 0..n-1.
RVector superdiagonal(const RVector& b, const RVector& c);

// Antisymmetric M with M(j, j+1) = w_j, M(j+1, j) = -w_j.
RMatrix generator(const RVector& b, const RVector& c);

// exp(M tau).
RMatrix segment_propagator(const RVector& b, const RVector& c, double tau);

// Exact final state of a schedule.
RVector final_state(const RVector& a0, const Schedule& s);

// Samples at t = k dt for k = 0.. while k dt < total duration, plus the
// final time.
std::vector<SphereState> evolve_reduced(const SphereState& s, const Schedule& schedule, double dt);

// Best P_win over unit vectors with a_j = 0 for j > T.
double discrete_achievable_pwin(int n, int t, Objective obj);

// Smallest T with discrete_achievable_pwin(n, T, interrogation) >= target.
int van_dam_query_count(int n, double target);

// (pi t / 2)^j / j!.
double lower_bound_envelope(int n, double t, int j);

// A_j = sqrt(sum_{k >= j} a_k^2).
RVector tail_norms(const RVector& a);

struct LowerBound {
  double time = 0.0;
  double asymptotic = 0.0;  // n / (pi e)
};

// (2/pi) (m!)^{1/m} |P - 1/2|^{1/m}, m = floor(n/2).
LowerBound min_time_lower_bound(int n, double pwin);

// Full-space model. A = 2^n, M = 2(n + 1) with index 2j + k (j = 0 is the
// null query, j >= 1 queries bit j, k is the sign bit),
// H = (pi/2) (-1)^{x_j + k}, M' = 2^n (interrogation) or 2 (parity).
core::OracleProblem make_problem(int n, core::TimeModel model, Objective obj, double delta = 1.0);

// Projectors onto Hadamard-basis Hamming weight j, j = 0..n.
std::vector<CMatrix> hadamard_weight_projectors(int n);

// a_j^2 from Alice's operator.
RVector weights_from_rho(const CMatrix& rho);

// Ancilla size of the reduced-to-full mapping: 2^n (n + 1).
int full_ancilla_dim(int n);

// Purification (dim_a x dim_m dim_b) of the symmetric message state built
// from a (signed) and the controls.
CMatrix symmetric_purification(int n, const RVector& a, const RVector& b, const RVector& c);

struct FullComparison {
  double max_deviation = 0.0;
  double final_pwin_full = 0.0;
  double final_pwin_reduced = 0.0;
  double max_transfer_residual = 0.0;
  std::size_t steps = 0;
  std::vector<double> t;
  std::vector<RVector> full;
  std::vector<RVector> reduced;
};

// Runs the schedule on the full space with Bob's purification transfers
// and compares |a_j| against evolve_reduced on the same time grid.
FullComparison verify_reduced_against_full(int n, const Schedule& schedule, double dt,
                                           kernels::Backend be = kernels::Backend::parallel);

}  // namespace hamoracle::interrogation
