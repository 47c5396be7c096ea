#include <stdexcept>

#include "hamoracle/kernels.hpp"

namespace hamoracle::kernels {

namespace serial {

void apply_phases(CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b) {
  const Eigen::Index dim_a = psi.rows();
  for (Eigen::Index col = 0; col < psi.cols(); ++col) {
    const Eigen::Index m = col / dim_b;
    for (Eigen::Index a = 0; a < dim_a; ++a) psi(a, col) *= factors(a, m);
  }
}

void apply_right(CMatrix& psi, const CMatrix& w) {
  const Eigen::Index rows = psi.rows(), d = psi.cols();
  CMatrix out = CMatrix::Zero(rows, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) {
      const cplx wkj = w(k, j);
      if (wkj == cplx(0.0, 0.0)) continue;
      for (Eigen::Index i = 0; i < rows; ++i) out(i, j) += psi(i, k) * wkj;
    }
  psi = std::move(out);
}

void apply_low_rank(CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt) {
  const Eigen::Index rows = psi.rows(), d = psi.cols(), r = p.cols();
  CMatrix tmp = CMatrix::Zero(rows, r);
  for (Eigen::Index c = 0; c < r; ++c)
    for (Eigen::Index e = 0; e < d; ++e)
      for (Eigen::Index i = 0; i < rows; ++i) tmp(i, c) += psi(i, e) * p(e, c);
  CMatrix tk = CMatrix::Zero(rows, r);
  for (Eigen::Index c = 0; c < r; ++c)
    for (Eigen::Index l = 0; l < r; ++l)
      for (Eigen::Index i = 0; i < rows; ++i) tk(i, c) += tmp(i, l) * k(l, c);
  for (Eigen::Index e = 0; e < d; ++e)
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index i = 0; i < rows; ++i) psi(i, e) += tk(i, c) * qt(c, e);
}

CMatrix gram(const CMatrix& psi) {
  const Eigen::Index rows = psi.rows();
  CMatrix g = CMatrix::Zero(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < rows; ++j) {
      cplx s = 0.0;
      for (Eigen::Index e = 0; e < psi.cols(); ++e) s += psi(i, e) * std::conj(psi(j, e));
      g(i, j) = s;
    }
  return g;
}

CMatrix trace_ancilla(const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b) {
  const Eigen::Index dim_a = psi.rows();
  const Eigen::Index n = dim_a * dim_m;
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index a = 0; a < dim_a; ++a)
    for (Eigen::Index m = 0; m < dim_m; ++m)
      for (Eigen::Index a2 = 0; a2 < dim_a; ++a2)
        for (Eigen::Index m2 = 0; m2 < dim_m; ++m2) {
          cplx s = 0.0;
          for (Eigen::Index b = 0; b < dim_b; ++b)
            s += psi(a, m * dim_b + b) * std::conj(psi(a2, m2 * dim_b + b));
          out(a * dim_m + m, a2 * dim_m + m2) = s;
        }
  return out;
}

}  // namespace serial

void apply_phases(Backend be, CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b) {
  if (be == Backend::serial) serial::apply_phases(psi, factors, dim_b);
  else parallel::apply_phases(psi, factors, dim_b);
}

void apply_right(Backend be, CMatrix& psi, const CMatrix& w) {
  if (w.rows() != psi.cols() || w.cols() != psi.cols())
    throw std::invalid_argument("apply_right: dimension mismatch");
  if (be == Backend::serial) serial::apply_right(psi, w);
  else parallel::apply_right(psi, w);
}

void apply_low_rank(Backend be, CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt) {
  if (p.rows() != psi.cols() || qt.cols() != psi.cols() || k.rows() != p.cols() || k.cols() != qt.rows())
    throw std::invalid_argument("apply_low_rank: dimension mismatch");
  if (be == Backend::serial) serial::apply_low_rank(psi, p, k, qt);
  else parallel::apply_low_rank(psi, p, k, qt);
}

CMatrix gram(Backend be, const CMatrix& psi) {
  return be == Backend::serial ? serial::gram(psi) : parallel::gram(psi);
}

CMatrix trace_ancilla(Backend be, const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b) {
  if (dim_m * dim_b != psi.cols()) throw std::invalid_argument("trace_ancilla: dimension mismatch");
  return be == Backend::serial ? serial::trace_ancilla(psi, dim_m, dim_b)
                               : parallel::trace_ancilla(psi, dim_m, dim_b);
}

}  // namespace hamoracle::kernels
