#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "hamoracle/interrogation.hpp"

namespace hamoracle::interrogation {

namespace {

void require_full_bits(int n) {
  if (n < 1 || n > 10) throw std::invalid_argument("full-space model supports 1 <= n <= 10");
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Amplitudes of H^{(x) n}|y> in the computational basis.
RMatrix hadamard_matrix(int n) {
  const int dim = 1 << n;
  RMatrix h(dim, dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int x = 0; x < dim; ++x)
    for (int y = 0; y < dim; ++y) h(x, y) = (std::popcount(static_cast<unsigned>(x & y)) % 2 ? -s : s);
  return h;
}

// Removes bit `bit` from y, packing the higher bits down.
int drop_bit(int y, int bit) { return (y & ((1 << bit) - 1)) | ((y >> (bit + 1)) << bit); }

}  // namespace

core::OracleProblem make_problem(int n, core::TimeModel model, Objective obj, double delta) {
  require_full_bits(n);
  const int dim = 1 << n;
  core::OracleProblem p;
  p.model = model;
  p.dim_a = dim;
  p.dim_m = 2 * (n + 1);
  p.dim_m_prime = obj == Objective::interrogation ? dim : 2;
  p.delta = delta;
  p.psi0 = CVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  p.phase_table = CMatrix(dim, p.dim_m);
  for (int x = 0; x < dim; ++x)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k < 2; ++k) {
        const int xj = j == 0 ? 0 : (x >> (j - 1)) & 1;
        const double h = (kPi / 2.0) * ((xj + k) % 2 ? -1.0 : 1.0);
        p.phase_table(x, 2 * j + k) = model == core::TimeModel::continuous ? cplx(h) : std::exp(-kI * delta * h);
      }
  for (int x = 0; x < dim; ++x) {
    RVector d = RVector::Zero(static_cast<Eigen::Index>(dim) * p.dim_m_prime);
    const int answer = obj == Objective::interrogation ? x : std::popcount(static_cast<unsigned>(x)) % 2;
    d(static_cast<Eigen::Index>(x) * p.dim_m_prime + answer) = dim;
    p.verifiers.push_back(core::Verifier::diagonal(std::move(d)));
  }
  return core::validate_problem(std::move(p));
}

std::vector<CMatrix> hadamard_weight_projectors(int n) {
  require_full_bits(n);
  const int dim = 1 << n;
  const RMatrix h = hadamard_matrix(n);
  std::vector<CMatrix> out(n + 1, CMatrix::Zero(dim, dim));
  for (int y = 0; y < dim; ++y) {
    const CVector v = h.col(y).cast<cplx>();
    out[std::popcount(static_cast<unsigned>(y))] += v * v.adjoint();
  }
  return out;
}

RVector weights_from_rho(const CMatrix& rho) {
  const int dim = static_cast<int>(rho.rows());
  const int n = std::countr_zero(static_cast<unsigned>(dim));
  if (dim != (1 << n) || rho.cols() != dim) throw std::invalid_argument("rho is not on 2^n dimensions");
  const RMatrix h = hadamard_matrix(n);
  const CMatrix hr = h.cast<cplx>().transpose() * rho * h.cast<cplx>();
  RVector w = RVector::Zero(n + 1);
  for (int y = 0; y < dim; ++y) w(std::popcount(static_cast<unsigned>(y))) += hr(y, y).real();
  return w;
}

int full_ancilla_dim(int n) { return (1 << n) * (n + 1); }

CMatrix symmetric_purification(int n, const RVector& a, const RVector& b, const RVector& c) {
  require_full_bits(n);
  const int dim = 1 << n;
  const int dim_b = full_ancilla_dim(n);
  const int dim_m = 2 * (n + 1);
  const int half = dim >> 1;
  const RMatrix h = hadamard_matrix(n);
  CMatrix phi = CMatrix::Zero(dim, static_cast<Eigen::Index>(dim_m) * dim_b);

  for (int y = 0; y < dim; ++y) {
    const int j = std::popcount(static_cast<unsigned>(y));
    double zeta = a(j) * a(j);
    if (j < n) zeta -= a(j) * a(j) * b(j) * b(j);
    if (j > 0) zeta -= a(j) * a(j) * c(j) * c(j);
    if (zeta < -1e-12) throw std::domain_error("schedule inconsistent with symmetric state positivity");
    phi.col(y) = (std::sqrt(std::max(0.0, zeta) / binomial(n, j)) * h.col(y)).cast<cplx>();
  }

  for (int i = 1; i <= n; ++i) {
    const int bit = i - 1;
    for (int y = 0; y < dim; ++y) {
      if ((y >> bit) & 1) continue;
      const int j = std::popcount(static_cast<unsigned>(y));
      const double kappa = 1.0 / std::sqrt(2.0 * n * binomial(n - 1, j));
      const double v0 = b(j) * a(j);
      const double v1 = c(j + 1) * a(j + 1);
      const int z = drop_bit(y, bit);
      for (int k = 0; k < 2; ++k) {
        const cplx up = (k == 0 ? -kI : kI) * v1;
        const int label = dim + ((i - 1) * 2 + k) * half + z;
        const Eigen::Index col = static_cast<Eigen::Index>(2 * i + k) * dim_b + label;
        phi.col(col) = kappa * (v0 * h.col(y).cast<cplx>() + up * h.col(y | (1 << bit)).cast<cplx>());
      }
    }
  }
  return phi;
}

FullComparison verify_reduced_against_full(int n, const Schedule& schedule, double dt, kernels::Backend be) {
  if (n < 1 || n > 3) throw std::invalid_argument("verify_reduced_against_full supports n <= 3");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  for (const Segment& seg : schedule) check_admissible(seg, n);
  const double total = total_duration(schedule);
  FullComparison out;
  if (!(total > 0.0)) return out;

  const auto steps = static_cast<std::size_t>(std::ceil(total / dt - 1e-9));
  const double h = total / static_cast<double>(steps);
  const std::vector<SphereState> ref = evolve_reduced({initial_vector(n), 0.0}, schedule, h);
  if (ref.size() != steps + 1) throw std::logic_error("reduced trajectory grid mismatch");

  std::vector<double> edges{0.0};
  for (const Segment& seg : schedule) edges.push_back(edges.back() + seg.duration);
  auto segment_at = [&](double t) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), t);
    const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - edges.begin() - 1));
    return std::min(idx, schedule.size() - 1);
  };

  const core::OracleProblem p = make_problem(n, core::TimeModel::continuous, Objective::interrogation);
  auto target = [&](std::size_t step, double, const CMatrix& rho) {
    const RVector w = weights_from_rho(rho);
    RVector a(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double sign = ref[step].a(j) < 0.0 ? -1.0 : 1.0;
      a(j) = sign * std::sqrt(std::max(0.0, w(j)));
    }
    const Segment& seg = schedule[segment_at((static_cast<double>(step) + 0.5) * h)];
    return symmetric_purification(n, a, seg.b, seg.c);
  };
  const core::AdaptiveRun run = core::run_adaptive(p, full_ancilla_dim(n), steps, h, target, false, be);

  out.steps = steps;
  out.max_transfer_residual = run.max_transfer_residual;
  for (std::size_t k = 0; k <= steps; ++k) {
    const RVector w = weights_from_rho(run.trajectory[k].rho);
    RVector full(n + 1);
    for (int j = 0; j <= n; ++j) full(j) = std::sqrt(std::max(0.0, w(j)));
    const RVector red = ref[k].a.cwiseAbs();
    out.max_deviation = std::max(out.max_deviation, (full - red).cwiseAbs().maxCoeff());
    out.t.push_back(run.trajectory[k].t);
    out.full.push_back(full);
    out.reduced.push_back(red);
  }
  out.final_pwin_full = pwin_interrogation(out.full.back());
  out.final_pwin_reduced = pwin_interrogation(out.reduced.back());
  return out;
}

}  // namespace hamoracle::interrogation
