#include "hamoracle/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace hamoracle {

double min_eigenvalue_hermitian(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double hermiticity_error(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  if (u.size() == 0) return 0.0;
  const CMatrix d = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

CMatrix sqrt_psd(const CMatrix& m, double tol) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  RVector ev = es.eigenvalues();
  // Eigenvalues at the solver's roundoff level are zero; their square
  // roots would otherwise contribute ~1e-8.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol) throw std::invalid_argument("sqrt_psd: matrix not PSD");
    ev(i) = ev(i) > floor ? std::sqrt(ev(i)) : 0.0;
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm_hermitian(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

CMatrix positive_part_projector(const CMatrix& h) {
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  CMatrix p = CMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (es.eigenvalues()(i) > 0.0) {
      const CVector v = es.eigenvectors().col(i);
      p += v * v.adjoint();
    }
  }
  return p;
}

CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

CMatrix expm_hermitian(const CMatrix& h, double t) {
  const CMatrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  CVector ph(herm.rows());
  for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(-kI * es.eigenvalues()(i) * t);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

RMatrix expm_antisymmetric(const RMatrix& g) {
  const Eigen::Index n = g.rows();
  if (n != g.cols()) throw std::invalid_argument("expm_antisymmetric: matrix not square");
  if (n == 0) return RMatrix(0, 0);
  if (n == 1) return RMatrix::Identity(1, 1);
  if (n == 2) {
    const double w = g(1, 0);
    RMatrix r(2, 2);
    r << std::cos(w), -std::sin(w), std::sin(w), std::cos(w);
    return r;
  }
  if (n == 3) {
    const double w1 = g(2, 1), w2 = g(0, 2), w3 = g(1, 0);
    const double th2 = w1 * w1 + w2 * w2 + w3 * w3;
    const double th = std::sqrt(th2);
    double s, c;
    if (th < 1e-6) {
      s = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
      c = 0.5 - th2 / 24.0 + th2 * th2 / 720.0;
    } else {
      s = std::sin(th) / th;
      c = (1.0 - std::cos(th)) / th2;
    }
    return RMatrix::Identity(3, 3) + s * g + c * (g * g);
  }
  return g.exp();
}

CMatrix orthonormal_range(const CMatrix& m, double tol) {
  if (m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix complete_to_unitary(const CMatrix& v) {
  const Eigen::Index n = v.rows(), k = v.cols();
  if (k > n) throw std::invalid_argument("complete_to_unitary: more columns than rows");
  CMatrix out(n, n);
  out.leftCols(k) = v;
  if (k == 0) return CMatrix::Identity(n, n);
  if (k < n) {
    Eigen::HouseholderQR<CMatrix> qr(v);
    const CMatrix q = qr.householderQ();
    out.rightCols(n - k) = q.rightCols(n - k);
  }
  return out;
}

}  // namespace hamoracle
