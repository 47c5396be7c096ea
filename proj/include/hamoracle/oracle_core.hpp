#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hamoracle/kernels.hpp"
#include "hamoracle/linalg.hpp"

namespace hamoracle::core {

class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TimeModel { discrete, continuous };

// Positive semidefinite operator on A (x) M', index a * dim_m_prime + m'.
class Verifier {
 public:
  static Verifier diagonal(RVector entries);
  static Verifier dense(CMatrix op);

  Eigen::Index dim() const;
  bool is_diagonal() const { return std::holds_alternative<RVector>(op_); }
  const RVector& diagonal_entries() const;
  CMatrix to_dense() const;
  double min_eigenvalue() const;
  double hermiticity_error() const;
  // Re Tr[Pi rho].
  double expectation(const CMatrix& rho) const;

 private:
  std::variant<RVector, CMatrix> op_;
};

struct OracleProblem {
  TimeModel model = TimeModel::continuous;
  int dim_a = 0;
  int dim_m = 0;
  int dim_m_prime = 0;
  CVector psi0;
  // C[j][k]: Hamiltonian eigenvalues (continuous) or unit-modulus phases
  // (discrete), j = hidden-string index, k = query index.
  CMatrix phase_table;
  std::vector<Verifier> verifiers;
  double delta = 1.0;
};

// Returns p unchanged or throws ProblemError naming the first violated
// invariant.
OracleProblem validate_problem(OracleProblem p);

struct ProtocolState {
  CMatrix rho;
  double t = 0.0;
};

using Trajectory = std::vector<ProtocolState>;

// Unitary acting on M (x) B, applied as I_A (x) U. Either dense or of the
// form U = I + P (K - I) P^dagger with P having orthonormal columns.
class BobUnitary {
 public:
  static BobUnitary identity(Eigen::Index dim);
  static BobUnitary dense(CMatrix u);
  static BobUnitary low_rank(CMatrix basis, CMatrix core);

  Eigen::Index dim() const { return dim_; }
  bool is_low_rank() const { return !dense_.has_value(); }
  CMatrix to_dense() const;
  double unitarity_error() const;
  // psi <- psi U^T for the amplitude layout of kernels.hpp.
  void apply(CMatrix& psi, kernels::Backend be) const;

 private:
  Eigen::Index dim_ = 0;
  std::optional<CMatrix> dense_;
  // Transposed low-rank factors: U^T = I + conj(P) (K - I)^T P^T.
  CMatrix left_;
  CMatrix core_;
  CMatrix right_;
};

struct ScheduleBlock {
  BobUnitary unitary;
  std::size_t repeat = 1;
};

// Bob's per-step unitaries, run-length encoded.
class FullControlSchedule {
 public:
  explicit FullControlSchedule(int dim_b) : dim_b_(dim_b) {}

  void push_back(BobUnitary u, std::size_t repeat = 1);
  int dim_b() const { return dim_b_; }
  std::size_t n_steps() const { return n_steps_; }
  const std::vector<ScheduleBlock>& blocks() const { return blocks_; }
  double max_unitarity_error() const;

 private:
  int dim_b_;
  std::size_t n_steps_ = 0;
  std::vector<ScheduleBlock> blocks_;
};

// Ancilla size sufficient to purify any state on A.
inline int default_ancilla_dim(const OracleProblem& p) { return p.dim_a; }

// Global pure state on A (x) M (x) B, starting at |psi0>|0>|0>.
class PurifiedState {
 public:
  PurifiedState(const OracleProblem& p, int dim_b, kernels::Backend be = kernels::Backend::parallel);

  const CMatrix& amplitudes() const { return psi_; }
  void set_amplitudes(CMatrix psi);
  int dim_b() const { return dim_b_; }
  Eigen::Index bob_dim() const { return psi_.cols(); }

  void apply_bob(const BobUnitary& u);
  // Discrete problems apply O (dt ignored); continuous problems e^{-iH dt}.
  void apply_oracle(double dt = 0.0);

  CMatrix alice_state() const;
  CMatrix alice_message_state() const;

 private:
  TimeModel model_;
  CMatrix phase_table_;
  int dim_m_;
  int dim_b_;
  kernels::Backend backend_;
  CMatrix psi_;
  CMatrix factors_;
  double factors_dt_ = -1.0;
};

Trajectory evolve_discrete(const OracleProblem& p, const FullControlSchedule& controls,
                           kernels::Backend be = kernels::Backend::parallel);

// First-order splitting: each step applies Bob's unitary then e^{-iH dt}.
Trajectory evolve_continuous(const OracleProblem& p, const FullControlSchedule& controls, double dt,
                             kernels::Backend be = kernels::Backend::parallel);

// Unitary W on Bob's side with from * W^T closest to `to` (Uhlmann polar
// map). Exact when from from^dagger = to to^dagger.
BobUnitary purification_transfer(const CMatrix& from, const CMatrix& to);

// Target purification chosen by Bob before step `step`, given Alice's
// current reduced operator. Must be dim_a x (dim_m * dim_b).
using PurificationTarget = std::function<CMatrix(std::size_t step, double t, const CMatrix& rho_a)>;

struct AdaptiveRun {
  Trajectory trajectory;
  std::optional<FullControlSchedule> schedule;
  // Largest Frobenius distance between the transferred and requested
  // purification over all steps.
  double max_transfer_residual = 0.0;
};

// Streams steps of a protocol whose Bob unitaries are computed on the fly
// as purification transfers. dt is ignored for discrete problems.
AdaptiveRun run_adaptive(const OracleProblem& p, int dim_b, std::size_t n_steps, double dt,
                         const PurificationTarget& target, bool keep_schedule,
                         kernels::Backend be = kernels::Backend::parallel);

double pwin_worst_case(const CMatrix& rho_prime, const OracleProblem& p);

enum class MeasurementKind { pretty_good, helstrom };

struct FinalMeasurement {
  double pwin = 0.0;
  CMatrix rho_prime;
  MeasurementKind kind = MeasurementKind::pretty_good;
};

// Optimal answer-register state for the two verifier structures in scope:
// identity-labelled answers (M' = A, Pi_x = N |x><x| (x) |x><x|) via the
// pretty-good measurement, and binary answers (M' = 2) via Helstrom.
FinalMeasurement optimal_final_measurement(const ProtocolState& rho_t, const OracleProblem& p);

struct DistinguishOptions {
  double t_max = 10.0;
  double scan_step = 1e-3;
  double tolerance = 1e-9;
  double hull_slack = 1e-12;
};

// Largest angular gap between the points exp(-i d_k t), minus pi. The
// origin lies in their convex hull iff this is <= 0.
double hull_gap_excess(const std::vector<double>& gaps, double t);

// Minimal t with the origin in conv{exp(-i (delta1_k - delta0_k) t)};
// nullopt when not reachable for t <= t_max.
std::optional<double> min_distinguish_time(const std::vector<double>& delta0,
                                           const std::vector<double>& delta1,
                                           const DistinguishOptions& opts = {});

struct ReducedState {
  std::vector<double> weights;     // a_alpha^2
  std::vector<double> amplitudes;  // +sqrt(a_alpha^2)
};

// a_alpha^2 = Tr[P_alpha rho] / normalization[alpha] (normalization
// defaults to 1).
ReducedState symmetrize_reduced(const CMatrix& rho, const std::vector<CMatrix>& projectors,
                                const std::vector<double>& normalization = {});

}  // namespace hamoracle::core
