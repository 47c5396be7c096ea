#include "hamoracle/kernels.hpp"

namespace hamoracle::kernels::parallel {

namespace {

// Below this many complex multiply-adds a kernel stays on one thread.
constexpr Eigen::Index kParallelWork = 1 << 14;

}  // namespace

void apply_phases(CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b) {
  const Eigen::Index dim_a = psi.rows();
  const Eigen::Index cols = psi.cols();
#pragma omp parallel for schedule(static) if (dim_a * cols > kParallelWork)
  for (Eigen::Index col = 0; col < cols; ++col) {
    const Eigen::Index m = col / dim_b;
    psi.col(col).array() *= factors.col(m).array();
  }
}

void apply_right(CMatrix& psi, const CMatrix& w) {
  const Eigen::Index rows = psi.rows(), d = psi.cols();
  CMatrix out(rows, d);
#pragma omp parallel for schedule(static) if (rows * d * d > kParallelWork)
  for (Eigen::Index j = 0; j < d; ++j) out.col(j).noalias() = psi * w.col(j);
  psi = std::move(out);
}

void apply_low_rank(CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt) {
  const CMatrix tk = (psi * p) * k;
  const Eigen::Index d = psi.cols();
#pragma omp parallel for schedule(static) if (psi.rows() * d * qt.rows() > kParallelWork)
  for (Eigen::Index e = 0; e < d; ++e) psi.col(e).noalias() += tk * qt.col(e);
}

CMatrix gram(const CMatrix& psi) {
  const Eigen::Index rows = psi.rows();
  CMatrix g(rows, rows);
#pragma omp parallel for schedule(static) if (rows * rows * psi.cols() > kParallelWork)
  for (Eigen::Index j = 0; j < rows; ++j) g.col(j).noalias() = psi * psi.row(j).adjoint();
  return g;
}

CMatrix trace_ancilla(const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b) {
  const Eigen::Index dim_a = psi.rows();
  const Eigen::Index n = dim_a * dim_m;
  CMatrix out(n, n);
#pragma omp parallel for schedule(static) if (n * n * dim_b > kParallelWork)
  for (Eigen::Index col = 0; col < n; ++col) {
    const Eigen::Index a2 = col / dim_m, m2 = col % dim_m;
    const auto rhs = psi.row(a2).segment(m2 * dim_b, dim_b);
    for (Eigen::Index a = 0; a < dim_a; ++a)
      for (Eigen::Index m = 0; m < dim_m; ++m)
        out(a * dim_m + m, col) = rhs.dot(psi.row(a).segment(m * dim_b, dim_b));
  }
  return out;
}

}  // namespace hamoracle::kernels::parallel
