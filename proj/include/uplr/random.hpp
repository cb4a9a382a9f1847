#pragma once

#include <random>

#include "uplr/types.hpp"

namespace uplr {

/// Deterministic source for all randomized routines. One instance per call chain;
/// nothing in the library owns global state.
class Rng {
public:
  explicit Rng(unsigned long long seed = kDefaultSeed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }

  /// Standard complex normal: independent N(0,1) real and imaginary parts.
  Complex gaussian_complex() { return {normal_(engine_), normal_(engine_)}; }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix A(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) A(i, j) = rng.gaussian_complex();
  return A;
}

inline ComplexVector random_unit_vector(Eigen::Index n, Rng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian_complex();
  double nrm = v.norm();
  if (nrm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / nrm;
}

/// Haar-distributed n x k orthonormal columns: QR of a Gaussian block with the
/// standard phase fix (columns multiplied by conj(sign(R_ii))).
inline ComplexMatrix random_orthonormal(Eigen::Index n, Eigen::Index k, Rng& rng) {
  ComplexMatrix G = random_gaussian(n, k, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(G);
  ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(n, k);
  ComplexMatrix R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    Complex r = R(j, j);
    if (std::abs(r) > 0) Q.col(j) *= std::conj(r / std::abs(r));
  }
  return Q;
}

inline ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  return random_orthonormal(n, n, rng);
}

inline ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
  ComplexMatrix R = random_gaussian(n, n, rng);
  return R + R.adjoint();
}

}  // namespace uplr
