#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace hamoracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue_hermitian(const CMatrix& m);

// Deviation of m from Hermitian, max-abs entry of m - m^dagger.
double hermiticity_error(const CMatrix& m);

// Max-abs entry of u^dagger u - I.
double unitarity_error(const CMatrix& u);

// Principal square root of a Hermitian PSD matrix; negative eigenvalues
// above -tol are clipped to zero.
CMatrix sqrt_psd(const CMatrix& m, double tol = 1e-10);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm_hermitian(const CMatrix& m);

// Projector onto the span of eigenvectors of h with positive eigenvalue.
CMatrix positive_part_projector(const CMatrix& h);

// Haar-random unitary via QR of a complex Gaussian matrix.
CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

// e^{-i h t} for Hermitian h.
CMatrix expm_hermitian(const CMatrix& h, double t);

// exp(g) for a real antisymmetric g. Uses the closed-form rotation for
// 2x2 and Rodrigues' formula for 3x3; larger sizes fall back to a
// scaling-and-squaring Pade exponential.
RMatrix expm_antisymmetric(const RMatrix& g);

// Columns forming an orthonormal basis of range(m), rank cut at tol.
CMatrix orthonormal_range(const CMatrix& m, double tol = 1e-10);

// Completes an isometry v (rows >= cols, orthonormal columns) to a
// square unitary whose leading columns are v.
CMatrix complete_to_unitary(const CMatrix& v);

}  // namespace hamoracle
