#pragma once

#include "hamoracle/linalg.hpp"

// Inner loops of the purified-state simulator. The global state is stored
// as a dim_a x (dim_m * dim_b) amplitude matrix psi with column index
// m * dim_b + b. Each kernel exists in a plain serial form, kept as the
// reference, and an OpenMP form used by default.

namespace hamoracle::kernels {

enum class Backend { serial, parallel };

namespace serial {

// psi(a, m*dim_b + b) *= factors(a, m).
void apply_phases(CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b);

// psi <- psi * w for a dense square w.
void apply_right(CMatrix& psi, const CMatrix& w);

// psi <- psi + (psi * p) * k * q^T, the identity-plus-low-rank update.
void apply_low_rank(CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt);

// psi * psi^dagger, Alice's reduced operator.
CMatrix gram(const CMatrix& psi);

// Reduced operator on A (x) M, tracing out the dim_b ancilla.
CMatrix trace_ancilla(const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b);

}  // namespace serial

namespace parallel {

void apply_phases(CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b);
void apply_right(CMatrix& psi, const CMatrix& w);
void apply_low_rank(CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt);
CMatrix gram(const CMatrix& psi);
CMatrix trace_ancilla(const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b);

}  // namespace parallel

void apply_phases(Backend be, CMatrix& psi, const CMatrix& factors, Eigen::Index dim_b);
void apply_right(Backend be, CMatrix& psi, const CMatrix& w);
void apply_low_rank(Backend be, CMatrix& psi, const CMatrix& p, const CMatrix& k, const CMatrix& qt);
CMatrix gram(Backend be, const CMatrix& psi);
CMatrix trace_ancilla(Backend be, const CMatrix& psi, Eigen::Index dim_m, Eigen::Index dim_b);

}  // namespace hamoracle::kernels
