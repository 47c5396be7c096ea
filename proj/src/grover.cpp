#include "hamoracle/grover.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hamoracle::grover {

namespace {

void require_items(std::int64_t n) {
  if (n < 2) throw std::invalid_argument("Grover needs N > 1");
}

double clamp_unit(double v, double slack, const char* what) {
  if (v < -slack || v > 1.0 + slack) throw std::domain_error(what);
  return std::clamp(v, 0.0, 1.0);
}

double beta_abs(std::int64_t n, double delta) {
  const double nn = static_cast<double>(n);
  return 2.0 * std::sin(kPi * delta / 2.0) * std::sqrt(nn - 1.0) / nn;
}

}  // namespace

double pwin_from_x(double x, std::int64_t n) {
  require_items(n);
  x = clamp_unit(x, 1e-12, "pwin_from_x: x outside [0, 1]");
  const double nn = static_cast<double>(n);
  const double s = std::sqrt(x) + std::sqrt((nn - 1.0) * (1.0 - x));
  const double p = s * s / nn;
  return p > 1.0 && p < 1.0 + 1e-12 ? 1.0 : p;
}

ContinuousSample continuous_x(double t, std::int64_t n) {
  require_items(n);
  const double nn = static_cast<double>(n);
  const double c = std::cos(kPi * std::sqrt(nn - 1.0) * t / nn);
  return {c * c, t > continuous_exact_time(n)};
}

double continuous_exact_time(std::int64_t n) {
  require_items(n);
  const double nn = static_cast<double>(n);
  return (1.0 / kPi) * (nn / std::sqrt(nn - 1.0)) * std::acos(1.0 / std::sqrt(nn));
}

GroverQueryParams query_params(std::int64_t n, double delta) {
  require_items(n);
  const double nn = static_cast<double>(n);
  const cplx kick = std::exp(-kI * kPi * delta) - 1.0;
  return {1.0 + kick / nn, kick * std::sqrt(nn - 1.0) / nn, delta};
}

double discrete_step_optimal(double x, std::int64_t n, double delta) {
  require_items(n);
  x = clamp_unit(x, 1e-12, "discrete_step_optimal: x outside [0, 1]");
  const double b = beta_abs(n, delta);
  const double a = std::sqrt(std::max(0.0, 1.0 - b * b));
  const double v = a * std::sqrt(x) - b * std::sqrt(1.0 - x);
  return v * v;
}

DiscreteTime discrete_exact_time(std::int64_t n, double delta) {
  require_items(n);
  if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("delta must lie in (0, 1]");
  const double nn = static_cast<double>(n);
  const double r = std::acos(1.0 / std::sqrt(nn)) / std::asin(std::min(1.0, beta_abs(n, delta)));
  const auto q = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(r - 1e-9)));
  return {delta * static_cast<double>(q), q};
}

std::vector<double> discrete_trajectory(std::int64_t n, double delta) {
  const DiscreteTime dt = discrete_exact_time(n, delta);
  std::vector<double> xs{1.0};
  double x = 1.0;
  for (std::int64_t q = 1; q <= dt.queries; ++q) {
    x = q < dt.queries ? discrete_step_optimal(x, n, delta) : 1.0 / static_cast<double>(n);
    xs.push_back(x);
  }
  return xs;
}

FgComparison fg_comparison(std::int64_t n) {
  FgComparison c;
  c.t_optimal = continuous_exact_time(n);
  c.t_fg = std::sqrt(static_cast<double>(n)) / 2.0;
  c.gap = c.t_fg - c.t_optimal;
  c.ratio = c.t_fg / c.t_optimal;
  return c;
}

RealizationCheck verify_unitary_realization(int n, double dt) {
  require_items(n);
  if (n > 64) throw std::invalid_argument("verify_unitary_realization supports N <= 64");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double nn = n;
  const CVector plus = CVector::Constant(n, 1.0 / std::sqrt(nn));
  CMatrix h0 = (kPi * (nn - 2.0) / nn) * (plus * plus.adjoint());
  h0(0, 0) += kPi;
  const double t_end = continuous_exact_time(n);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const CMatrix u0 = expm_hermitian(h0, h);

  // H_j = S_j H_0 S_j with S_j the transposition (0 j), and S_j|+> = |+>,
  // so phi_j = S_j phi_0.
  auto states = [&](const CVector& phi0) {
    CMatrix s(n, n);
    for (int j = 0; j < n; ++j) {
      CVector v = phi0;
      std::swap(v(0), v(j));
      s.col(j) = v;
    }
    return s;
  };

  RealizationCheck out;
  CVector phi0 = plus;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const CMatrix s = states(phi0);
    const double x = (s.rowwise().sum() / nn).squaredNorm();
    out.max_x_deviation = std::max(out.max_x_deviation, std::abs(x - continuous_x(t, n).x));
    if (k == steps) {
      const CMatrix g = s.adjoint() * s;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) out.max_final_overlap = std::max(out.max_final_overlap, std::abs(g(i, j)));
      if (n == 2) {
        const CMatrix u = -kI * CMatrix::Identity(n, n) + (1.0 + kI) * (plus * plus.adjoint());
        for (int j = 0; j < n; ++j)
          out.max_u_mismatch = std::max(out.max_u_mismatch, 1.0 - std::abs(u.col(j).dot(s.col(j))));
      }
    } else {
      phi0 = u0 * phi0;
    }
  }
  out.max_deviation = std::max({out.max_x_deviation, out.max_final_overlap, out.max_u_mismatch});
  return out;
}

core::OracleProblem make_problem(int n, core::TimeModel model, double delta) {
  require_items(n);
  core::OracleProblem p;
  p.model = model;
  p.dim_a = n;
  p.dim_m = n + 1;
  p.dim_m_prime = n;
  p.delta = delta;
  p.psi0 = CVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  p.phase_table = CMatrix(n, n + 1);
  const cplx kick = std::exp(-kI * kPi * delta);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m <= n; ++m) {
      const bool hit = m == a + 1;
      if (model == core::TimeModel::continuous) p.phase_table(a, m) = hit ? kPi : 0.0;
      else p.phase_table(a, m) = hit ? kick : cplx(1.0);
    }
  for (int x = 0; x < n; ++x) {
    RVector d = RVector::Zero(static_cast<Eigen::Index>(n) * n);
    d(static_cast<Eigen::Index>(x) * n + x) = n;
    p.verifiers.push_back(core::Verifier::diagonal(std::move(d)));
  }
  return core::validate_problem(std::move(p));
}

std::vector<CMatrix> plus_projectors(int n) {
  const CMatrix pp = CMatrix::Constant(n, n, 1.0 / n);
  return {pp, CMatrix::Identity(n, n) - pp};
}

double x_of(const CMatrix& rho) { return rho.sum().real() / static_cast<double>(rho.rows()); }

core::FullControlSchedule realized_hamiltonian_schedule(int n, double dt, std::size_t steps) {
  require_items(n);
  const double theta = kPi * (n - 2.0) / n * dt;
  CVector plus = CVector::Zero(n + 1);
  plus.tail(n).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  CMatrix q(n + 1, 2);
  q.col(0) = CVector::Unit(n + 1, 0);
  q.col(1) = plus;
  // |0> -> |+>, |+> -> -|0>, then exp(-i theta/2 |+><+|).
  CMatrix k0(2, 2);
  k0 << 0.0, -1.0, std::exp(-kI * theta / 2.0), 0.0;
  core::FullControlSchedule s(1);
  if (steps == 0) return s;
  s.push_back(core::BobUnitary::low_rank(q, k0));
  CMatrix k1(1, 1);
  k1(0, 0) = std::exp(-kI * theta);
  if (steps > 1) s.push_back(core::BobUnitary::low_rank(plus, k1), steps - 1);
  return s;
}

SimulatedCurve simulate_realized_hamiltonian(int n, double t_end, double dt, kernels::Backend be) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("need dt > 0 and t_end > 0");
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  const core::OracleProblem p = make_problem(n, core::TimeModel::continuous);
  const core::Trajectory traj = core::evolve_continuous(p, realized_hamiltonian_schedule(n, h, steps), h, be);
  SimulatedCurve c;
  for (const core::ProtocolState& s : traj) {
    c.t.push_back(s.t);
    c.x.push_back(x_of(s.rho));
  }
  return c;
}

core::AdaptiveRun simulate_discrete_optimal(int n, double delta, bool keep_schedule, kernels::Backend be) {
  const DiscreteTime qt = discrete_exact_time(n, delta);
  const core::OracleProblem p = make_problem(n, core::TimeModel::discrete, delta);
  const double nn = n;
  const int dim_b = 2 * n;

  // Matrix elements of the actual item-0 oracle.
  CVector plus = CVector::Constant(n, 1.0 / std::sqrt(nn));
  auto minus_state = [&](int j) {
    CVector v = CVector::Constant(n, -1.0 / std::sqrt(nn * (nn - 1.0)));
    v(j) = std::sqrt((nn - 1.0) / nn);
    return v;
  };
  const CVector o1 = p.phase_table.col(1);
  const cplx alpha = plus.dot(o1.cwiseProduct(plus));
  const cplx beta = plus.dot(o1.cwiseProduct(minus_state(0)));
  const double aa = std::abs(alpha), ba = std::abs(beta);
  const cplx chi = ba > 0.0 && aa > 0.0 ? -alpha * std::conj(beta) / (aa * ba) : cplx(1.0);
  const double floor_amp = 1.0 / std::sqrt(nn);

  auto target = [&](std::size_t, double, const CMatrix& rho) {
    const double x = std::clamp(x_of(rho), 0.0, 1.0);
    const double y = (1.0 - x) / (nn - 1.0);
    double x0 = 0.0, a = x / nn, c = (1.0 - x) / nn;
    const double reach = aa * std::sqrt(x) - ba * std::sqrt(1.0 - x);
    if (reach < floor_amp) {
      if (aa * std::sqrt(x) >= floor_amp) {
        const double s = (aa * std::sqrt(x) - floor_amp) / ba;
        c = s * s / nn;
      } else {
        c = 0.0;
        x0 = (1.0 / nn - aa * aa * x) / (1.0 - aa * aa);
        a = (x - x0) / nn;
      }
    }
    // Weights left on the null query; differences at roundoff level are zero.
    double y0 = y - c * nn / (nn - 1.0);
    if (y0 < 1e-14) y0 = 0.0;
    if (x0 < 1e-14) x0 = 0.0;
    const CMatrix pp = plus * plus.adjoint();
    const CMatrix sq0 = std::sqrt(x0) * pp + std::sqrt(y0) * (CMatrix::Identity(n, n) - pp);
    CMatrix phi = CMatrix::Zero(n, static_cast<Eigen::Index>(n + 1) * dim_b);
    for (int l = 0; l < n; ++l) phi.col(l) = sq0.col(l);
    for (int j = 0; j < n; ++j)
      phi.col(static_cast<Eigen::Index>(j + 1) * dim_b + n + j) =
          std::sqrt(a) * plus + chi * std::sqrt(c) * minus_state(j);
    return phi;
  };
  return core::run_adaptive(p, dim_b, static_cast<std::size_t>(qt.queries), 0.0, target, keep_schedule, be);
}

}  // namespace hamoracle::grover
