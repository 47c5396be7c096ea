#pragma once

#include <cstdint>
#include <vector>

#include "hamoracle/oracle_core.hpp"

// One marked item among N. The symmetric state is
// rho = x |+><+| + y (I - |+><+|) with y = (1 - x) / (N - 1).

namespace hamoracle::grover {

struct GroverState {
  double x = 1.0;
  std::int64_t n_items = 2;
  double t = 0.0;
};

struct GroverQueryParams {
  cplx alpha;
  cplx beta;
  double delta = 1.0;
};

// (sqrt(x) + sqrt((N-1)(1-x)))^2 / N.
double pwin_from_x(double x, std::int64_t n);

struct ContinuousSample {
  double x = 1.0;
  // True once t exceeds the first zero-error time.
  bool past_optimum = false;
};

// cos^2(pi sqrt(N-1) t / N).
ContinuousSample continuous_x(double t, std::int64_t n);

// (1/pi) (N / sqrt(N-1)) arccos(1/sqrt(N)).
double continuous_exact_time(std::int64_t n);

// alpha = <+|O_1|+>, beta = <+|O_1|-_1> for O_1 = exp(-i pi delta |1><1|).
GroverQueryParams query_params(std::int64_t n, double delta);

// (|alpha| sqrt(x) - |beta| sqrt(1-x))^2.
double discrete_step_optimal(double x, std::int64_t n, double delta);

struct DiscreteTime {
  double time = 0.0;
  std::int64_t queries = 0;
};

// delta * ceil(arccos(1/sqrt(N)) / arcsin(|beta|)).
DiscreteTime discrete_exact_time(std::int64_t n, double delta);

// x after each query of the optimal discrete protocol, with the last
// query landing exactly on 1/N. Element 0 is x(0) = 1.
std::vector<double> discrete_trajectory(std::int64_t n, double delta);

struct FgComparison {
  double t_optimal = 0.0;
  double t_fg = 0.0;
  double gap = 0.0;
  double ratio = 0.0;
};

FgComparison fg_comparison(std::int64_t n);

struct RealizationCheck {
  double max_x_deviation = 0.0;
  double max_final_overlap = 0.0;
  // N = 2 only: 1 - |<U j|phi_j(T)>| maximised over j; 0 otherwise.
  double max_u_mismatch = 0.0;
  double max_deviation = 0.0;
};

// Evolves |phi_j(t)> = exp(-i H_j t)|+> with
// H_j = pi |j><j| + pi (N-2)/N |+><+| and checks x(t) and final
// orthogonality at T = continuous_exact_time(N).
RealizationCheck verify_unitary_realization(int n, double dt);

// Full-space problem: A = items, M = {null} + items (M index j+1 queries
// item j), M' = items, Pi_x = N |x><x| (x) |x><x|.
core::OracleProblem make_problem(int n, core::TimeModel model, double delta = 1.0);

// {|+><+|, I - |+><+|}.
std::vector<CMatrix> plus_projectors(int n);

double x_of(const CMatrix& rho);

// Bob's side of the realized Hamiltonian: the first step prepares |+>_M
// over the items and applies half of exp(-i H' dt); later steps apply
// exp(-i H' dt) with H' = pi (N-2)/N |+><+|_M. Ancilla dimension 1.
core::FullControlSchedule realized_hamiltonian_schedule(int n, double dt, std::size_t steps);

struct SimulatedCurve {
  std::vector<double> t;
  std::vector<double> x;
};

// Brute-force evolve_continuous of the realized Hamiltonian up to T with
// step dt' = T / ceil(T / dt) <= dt.
SimulatedCurve simulate_realized_hamiltonian(int n, double t_end, double dt,
                                             kernels::Backend be = kernels::Backend::parallel);

// Brute-force evolve of the optimal discrete protocol. Bob's unitaries are
// purification transfers onto the symmetric per-query states of the
// optimal split.
core::AdaptiveRun simulate_discrete_optimal(int n, double delta, bool keep_schedule = false,
                                            kernels::Backend be = kernels::Backend::parallel);

}  // namespace hamoracle::grover
