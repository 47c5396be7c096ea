#include "hamoracle/oracle_core.hpp"

#include <cmath>

namespace hamoracle::core {

Verifier Verifier::diagonal(RVector entries) {
  Verifier v;
  v.op_ = std::move(entries);
  return v;
}

Verifier Verifier::dense(CMatrix op) {
  if (op.rows() != op.cols()) throw ProblemError("verifier not square");
  Verifier v;
  v.op_ = std::move(op);
  return v;
}

Eigen::Index Verifier::dim() const {
  if (is_diagonal()) return std::get<RVector>(op_).size();
  return std::get<CMatrix>(op_).rows();
}

const RVector& Verifier::diagonal_entries() const {
  if (!is_diagonal()) throw std::logic_error("verifier is not diagonal");
  return std::get<RVector>(op_);
}

CMatrix Verifier::to_dense() const {
  if (is_diagonal()) return std::get<RVector>(op_).cast<cplx>().asDiagonal();
  return std::get<CMatrix>(op_);
}

double Verifier::min_eigenvalue() const {
  if (is_diagonal()) {
    const RVector& d = std::get<RVector>(op_);
    return d.size() ? d.minCoeff() : 0.0;
  }
  return min_eigenvalue_hermitian(std::get<CMatrix>(op_));
}

double Verifier::hermiticity_error() const {
  if (is_diagonal()) return 0.0;
  return hamoracle::hermiticity_error(std::get<CMatrix>(op_));
}

double Verifier::expectation(const CMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) throw ProblemError("verifier dimension mismatch");
  if (is_diagonal()) return (std::get<RVector>(op_).array() * rho.diagonal().real().array()).sum();
  return (std::get<CMatrix>(op_).cwiseProduct(rho.transpose())).sum().real();
}

OracleProblem validate_problem(OracleProblem p) {
  if (p.dim_a <= 0 || p.dim_m <= 0 || p.dim_m_prime <= 0) throw ProblemError("dimensions must be positive");
  if (p.psi0.size() != p.dim_a) throw ProblemError("psi0 length differs from dim_a");
  if (std::abs(p.psi0.norm() - 1.0) > 1e-12) throw ProblemError("psi0 not unit norm");
  if (p.phase_table.rows() != p.dim_a || p.phase_table.cols() != p.dim_m)
    throw ProblemError("phase table shape differs from dim_a x dim_m");
  for (Eigen::Index j = 0; j < p.phase_table.rows(); ++j)
    for (Eigen::Index k = 0; k < p.phase_table.cols(); ++k) {
      const cplx c = p.phase_table(j, k);
      if (p.model == TimeModel::discrete && std::abs(std::abs(c) - 1.0) > 1e-12)
        throw ProblemError("discrete phase not unimodular");
      if (p.model == TimeModel::continuous && std::abs(c.imag()) > 1e-12)
        throw ProblemError("continuous phase not real");
    }
  if (p.model == TimeModel::discrete && !(p.delta > 0.0)) throw ProblemError("delta must be positive");
  const Eigen::Index vdim = static_cast<Eigen::Index>(p.dim_a) * p.dim_m_prime;
  for (const Verifier& v : p.verifiers) {
    if (v.dim() != vdim) throw ProblemError("verifier dimension differs from dim_a * dim_m_prime");
    if (v.hermiticity_error() > 1e-10) throw ProblemError("verifier not Hermitian");
    if (v.min_eigenvalue() < -1e-10) throw ProblemError("verifier not PSD");
  }
  return p;
}

BobUnitary BobUnitary::identity(Eigen::Index dim) {
  return low_rank(CMatrix(dim, 0), CMatrix(0, 0));
}

BobUnitary BobUnitary::dense(CMatrix u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("Bob unitary not square");
  BobUnitary b;
  b.dim_ = u.rows();
  b.dense_ = u.transpose();
  return b;
}

BobUnitary BobUnitary::low_rank(CMatrix basis, CMatrix core) {
  if (core.rows() != basis.cols() || core.cols() != basis.cols())
    throw std::invalid_argument("low-rank core shape differs from basis rank");
  BobUnitary b;
  b.dim_ = basis.rows();
  const Eigen::Index r = basis.cols();
  b.left_ = basis.conjugate();
  b.core_ = (core - CMatrix::Identity(r, r)).transpose();
  b.right_ = basis.transpose();
  return b;
}

CMatrix BobUnitary::to_dense() const {
  if (dense_) return dense_->transpose();
  const CMatrix ut = CMatrix::Identity(dim_, dim_) + left_ * core_ * right_;
  return ut.transpose();
}

double BobUnitary::unitarity_error() const { return hamoracle::unitarity_error(to_dense()); }

void BobUnitary::apply(CMatrix& psi, kernels::Backend be) const {
  if (psi.cols() != dim_) throw ProblemError("Bob unitary dimension mismatch");
  if (dense_) {
    kernels::apply_right(be, psi, *dense_);
  } else if (left_.cols() > 0) {
    kernels::apply_low_rank(be, psi, left_, core_, right_);
  }
}

void FullControlSchedule::push_back(BobUnitary u, std::size_t repeat) {
  if (repeat == 0) return;
  n_steps_ += repeat;
  blocks_.push_back({std::move(u), repeat});
}

double FullControlSchedule::max_unitarity_error() const {
  double e = 0.0;
  for (const ScheduleBlock& b : blocks_) e = std::max(e, b.unitary.unitarity_error());
  return e;
}

PurifiedState::PurifiedState(const OracleProblem& p, int dim_b, kernels::Backend be)
    : model_(p.model), phase_table_(p.phase_table), dim_m_(p.dim_m), dim_b_(dim_b), backend_(be) {
  if (dim_b <= 0) throw ProblemError("ancilla dimension must be positive");
  psi_ = CMatrix::Zero(p.dim_a, static_cast<Eigen::Index>(p.dim_m) * dim_b);
  psi_.col(0) = p.psi0;
  if (model_ == TimeModel::discrete) factors_ = phase_table_;
}

void PurifiedState::set_amplitudes(CMatrix psi) {
  if (psi.rows() != psi_.rows() || psi.cols() != psi_.cols())
    throw ProblemError("amplitude matrix shape mismatch");
  psi_ = std::move(psi);
}

void PurifiedState::apply_bob(const BobUnitary& u) { u.apply(psi_, backend_); }

void PurifiedState::apply_oracle(double dt) {
  if (model_ == TimeModel::continuous && dt != factors_dt_) {
    factors_ = CMatrix(phase_table_.rows(), phase_table_.cols());
    for (Eigen::Index j = 0; j < phase_table_.rows(); ++j)
      for (Eigen::Index k = 0; k < phase_table_.cols(); ++k)
        factors_(j, k) = std::exp(-kI * phase_table_(j, k).real() * dt);
    factors_dt_ = dt;
  }
  kernels::apply_phases(backend_, psi_, factors_, dim_b_);
}

CMatrix PurifiedState::alice_state() const { return kernels::gram(backend_, psi_); }

CMatrix PurifiedState::alice_message_state() const {
  return kernels::trace_ancilla(backend_, psi_, dim_m_, dim_b_);
}

namespace {

void check_controls(const OracleProblem& p, const FullControlSchedule& controls) {
  if (controls.dim_b() <= 0) throw ProblemError("ancilla dimension must be positive");
  const Eigen::Index d = static_cast<Eigen::Index>(p.dim_m) * controls.dim_b();
  for (const ScheduleBlock& b : controls.blocks())
    if (b.unitary.dim() != d) throw ProblemError("control unitary dimension differs from dim_m * dim_b");
}

Trajectory run_schedule(const OracleProblem& p, const FullControlSchedule& controls, double dt,
                        kernels::Backend be) {
  check_controls(p, controls);
  PurifiedState state(p, controls.dim_b(), be);
  Trajectory traj;
  traj.reserve(controls.n_steps() + 1);
  traj.push_back({state.alice_state(), 0.0});
  std::size_t step = 0;
  for (const ScheduleBlock& b : controls.blocks()) {
    for (std::size_t r = 0; r < b.repeat; ++r) {
      state.apply_bob(b.unitary);
      state.apply_oracle(dt);
      ++step;
      traj.push_back({state.alice_state(), static_cast<double>(step) * dt});
    }
  }
  return traj;
}

}  // namespace

Trajectory evolve_discrete(const OracleProblem& p, const FullControlSchedule& controls, kernels::Backend be) {
  if (p.model != TimeModel::discrete) throw ProblemError("evolve_discrete needs a discrete problem");
  return run_schedule(p, controls, p.delta, be);
}

Trajectory evolve_continuous(const OracleProblem& p, const FullControlSchedule& controls, double dt,
                             kernels::Backend be) {
  if (p.model != TimeModel::continuous) throw ProblemError("evolve_continuous needs a continuous problem");
  if (!(dt > 0.0)) throw ProblemError("dt must be positive");
  return run_schedule(p, controls, dt, be);
}

BobUnitary purification_transfer(const CMatrix& from, const CMatrix& to) {
  if (from.rows() != to.rows() || from.cols() != to.cols())
    throw ProblemError("purification shapes differ");
  const Eigen::Index d = from.cols();
  Eigen::JacobiSVD<CMatrix> s1(from, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMatrix y = s1.singularValues().cast<cplx>().asDiagonal() * (s1.matrixU().adjoint() * to);
  Eigen::JacobiSVD<CMatrix> s2(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const CMatrix lr = s1.matrixV() * s2.matrixU();
  const CMatrix rr = s2.matrixV();
  // W = lr rr^dagger on span(rr), completed to a unitary inside
  // span[lr, rr] and the identity elsewhere.
  CMatrix both(d, lr.cols() + rr.cols());
  both << lr, rr;
  const CMatrix q = orthonormal_range(both, 1e-9);
  const CMatrix l = complete_to_unitary(q.adjoint() * lr);
  const CMatrix r = complete_to_unitary(q.adjoint() * rr);
  const CMatrix kw = l * r.adjoint();
  // Bob's U = W^T = I + conj(q) (kw^T - I) conj(q)^dagger.
  return BobUnitary::low_rank(q.conjugate(), kw.transpose());
}

AdaptiveRun run_adaptive(const OracleProblem& p, int dim_b, std::size_t n_steps, double dt,
                         const PurificationTarget& target, bool keep_schedule, kernels::Backend be) {
  const bool discrete = p.model == TimeModel::discrete;
  if (!discrete && !(dt > 0.0)) throw ProblemError("dt must be positive");
  const double step_dt = discrete ? p.delta : dt;
  PurifiedState state(p, dim_b, be);
  AdaptiveRun run;
  if (keep_schedule) run.schedule.emplace(dim_b);
  run.trajectory.reserve(n_steps + 1);
  run.trajectory.push_back({state.alice_state(), 0.0});
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = static_cast<double>(step) * step_dt;
    const CMatrix want = target(step, t, run.trajectory.back().rho);
    if (want.rows() != state.amplitudes().rows() || want.cols() != state.bob_dim())
      throw ProblemError("target purification shape mismatch");
    BobUnitary u = purification_transfer(state.amplitudes(), want);
    state.apply_bob(u);
    run.max_transfer_residual = std::max(run.max_transfer_residual, (state.amplitudes() - want).norm());
    state.apply_oracle(step_dt);
    if (keep_schedule) run.schedule->push_back(std::move(u));
    run.trajectory.push_back({state.alice_state(), static_cast<double>(step + 1) * step_dt});
  }
  return run;
}

double pwin_worst_case(const CMatrix& rho_prime, const OracleProblem& p) {
  const Eigen::Index d = static_cast<Eigen::Index>(p.dim_a) * p.dim_m_prime;
  if (rho_prime.rows() != d || rho_prime.cols() != d) throw ProblemError("rho_prime dimension mismatch");
  if (p.verifiers.empty()) throw ProblemError("problem has no verifiers");
  double worst = INFINITY;
  for (const Verifier& v : p.verifiers) worst = std::min(worst, v.expectation(rho_prime));
  return worst;
}

namespace {

// For verifiers of the form N |x><x|_A (x) |f(x)><f(x)|_{M'}, returns f.
std::optional<std::vector<int>> answer_labels(const OracleProblem& p) {
  if (static_cast<int>(p.verifiers.size()) != p.dim_a) return std::nullopt;
  std::vector<int> f(p.dim_a, -1);
  const double n = p.dim_a;
  for (int x = 0; x < p.dim_a; ++x) {
    const Verifier& v = p.verifiers[x];
    if (!v.is_diagonal()) return std::nullopt;
    const RVector& d = v.diagonal_entries();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (std::abs(d(i)) <= 1e-12) continue;
      const int a = static_cast<int>(i / p.dim_m_prime);
      const int m = static_cast<int>(i % p.dim_m_prime);
      if (a != x || f[x] != -1 || std::abs(d(i) - n) > 1e-9 * n) return std::nullopt;
      f[x] = m;
    }
    if (f[x] < 0) return std::nullopt;
  }
  return f;
}

}  // namespace

FinalMeasurement optimal_final_measurement(const ProtocolState& rho_t, const OracleProblem& p) {
  if (rho_t.rho.rows() != p.dim_a || rho_t.rho.cols() != p.dim_a) throw ProblemError("rho dimension mismatch");
  const auto f = answer_labels(p);
  if (!f) throw ProblemError("unsupported verifier structure");
  const Eigen::Index na = p.dim_a, nm = p.dim_m_prime;
  const CMatrix sq = sqrt_psd(rho_t.rho);
  FinalMeasurement out;
  out.rho_prime = CMatrix::Zero(na * nm, na * nm);
  auto place = [&](const CMatrix& block, Eigen::Index m) {
    for (Eigen::Index a = 0; a < na; ++a)
      for (Eigen::Index a2 = 0; a2 < na; ++a2) out.rho_prime(a * nm + m, a2 * nm + m) += block(a, a2);
  };
  bool identity_labels = nm == na;
  for (int x = 0; x < p.dim_a && identity_labels; ++x) identity_labels = (*f)[x] == x;
  if (identity_labels) {
    out.kind = MeasurementKind::pretty_good;
    for (Eigen::Index x = 0; x < na; ++x) place(sq.col(x) * sq.col(x).adjoint(), x);
  } else if (nm == 2) {
    out.kind = MeasurementKind::helstrom;
    CMatrix p0 = CMatrix::Zero(na, na), p1 = CMatrix::Zero(na, na);
    for (Eigen::Index x = 0; x < na; ++x) ((*f)[x] == 0 ? p0 : p1)(x, x) = 1.0;
    // Positive eigenspace answers 0; the null space is split evenly so an
    // uninformative state still wins with probability 1/2 for every x.
    const CMatrix d = sq * (p0 - p1) * sq;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (d + d.adjoint()));
    const double tol = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    RVector weight(na);
    for (Eigen::Index i = 0; i < na; ++i) {
      const double ev = es.eigenvalues()(i);
      weight(i) = ev > tol ? 1.0 : ev < -tol ? 0.0 : 0.5;
    }
    const CMatrix e0 = es.eigenvectors() * weight.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    const CMatrix e1 = CMatrix::Identity(na, na) - e0;
    place(sq * e0 * sq, 0);
    place(sq * e1 * sq, 1);
  } else {
    throw ProblemError("unsupported verifier structure");
  }
  out.pwin = pwin_worst_case(out.rho_prime, p);
  return out;
}

ReducedState symmetrize_reduced(const CMatrix& rho, const std::vector<CMatrix>& projectors,
                                const std::vector<double>& normalization) {
  if (!normalization.empty() && normalization.size() != projectors.size())
    throw std::invalid_argument("normalization length differs from projector count");
  CMatrix sum = CMatrix::Zero(rho.rows(), rho.cols());
  for (const CMatrix& pr : projectors) {
    if (pr.rows() != rho.rows() || pr.cols() != rho.cols())
      throw std::invalid_argument("projector dimension mismatch");
    sum += pr;
  }
  if ((sum - CMatrix::Identity(rho.rows(), rho.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("projectors not a resolution of identity");
  ReducedState out;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    double w = (projectors[i].cwiseProduct(rho.transpose())).sum().real();
    if (!normalization.empty()) w /= normalization[i];
    out.weights.push_back(w);
    out.amplitudes.push_back(std::sqrt(std::max(0.0, w)));
  }
  return out;
}

}  // namespace hamoracle::core
