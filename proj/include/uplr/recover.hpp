#pragma once

#include "uplr/factors.hpp"
#include "uplr/kernels.hpp"
#include "uplr/structure.hpp"

namespace uplr {

enum class StructureKind { unitary, hermitian };

/// Explicit representation A = base + G * B^* recovered from a structured
/// matrix, with the Krylov convergence history and accuracy diagnostics.
struct StructuredDecomposition {
  StructureKind kind = StructureKind::hermitian;
  ComplexMatrix base;  ///< Hermitian (symmetrized) or numerically unitary
  ComplexMatrix G, B;  ///< n x width correction factors
  ConvergenceHistory history;
  double residual2 = 0.0;            ///< || A - base - G B^* ||_2
  double baseStructureError = 0.0;   ///< || H - H^* ||_2 resp. max_j |sigma_j(Q) - 1|
  bool exhaustedSteps = false;       ///< iteration consumed the whole space (no early breakdown)
  int restarts = 0;

  int width() const { return static_cast<int>(G.cols()); }
};

struct RecoverOptions {
  double eps = kDefaultEps;
  unsigned long long seed = kDefaultSeed;
  int maxSteps = -1;
  int maxRestarts = 5;
};

namespace detail {

inline KrylovOptions krylov_options(const RecoverOptions& opts) {
  KrylovOptions ko;
  ko.eps = opts.eps;
  ko.maxSteps = opts.maxSteps;
  ko.seed = opts.seed;
  ko.maxRestarts = opts.maxRestarts;
  return ko;
}

}  // namespace detail

/// Recover A = H + G B^* with H Hermitian: tridiagonalize the skew part on its
/// (low-dimensional) non-trivial invariant subspace, split the tridiagonal core
/// into symmetric rank-one pieces, and subtract.
inline StructuredDecomposition hk_find(const ComplexMatrix& A, const RecoverOptions& opts = {}) {
  detail::require_square(A, "hk_find");
  detail::require_finite(A, "hk_find");
  detail::require(opts.eps > 0, "hk_find: eps must be positive");

  const ComplexMatrix S = skew_part(A);
  LanczosResult lz = lanczos(S, detail::krylov_options(opts));
  if (!lz.converged)
    throw RecoveryError("hk_find: tridiagonalization of the skew part did not converge within " +
                            std::to_string(lz.history.steps()) + " steps and " +
                            std::to_string(lz.restarts) + " restarts",
                        lz.history);
  HermitianFactorization hf = hermitian_factors(lz.dense_tridiagonal(), opts.eps);

  StructuredDecomposition out;
  out.kind = StructureKind::hermitian;
  out.B = lz.basis * hf.B;
  const ComplexMatrix C = lz.basis * hf.C;
  out.G = Complex(0.0, 2.0) * C;
  const ComplexMatrix H = A - out.G * out.B.adjoint();
  out.base = (H + H.adjoint()) * 0.5;
  out.baseStructureError = spectral_norm(ComplexMatrix(H - H.adjoint()));
  out.residual2 = spectral_norm(ComplexMatrix(A - out.base - out.G * out.B.adjoint()));
  out.history = std::move(lz.history);
  out.exhaustedSteps = lz.basis.cols() == A.rows();
  out.restarts = lz.restarts;
  return out;
}

/// Recover A = Q + G B^* with Q unitary: bidiagonalize onto the subspace where
/// A deviates from an isometry, split the bidiagonal core, and subtract.
inline StructuredDecomposition uk_find(const ComplexMatrix& A, const RecoverOptions& opts = {}) {
  detail::require_square(A, "uk_find");
  detail::require_finite(A, "uk_find");
  detail::require(opts.eps > 0, "uk_find: eps must be positive");

  BidiagResult gk = golub_kahan(A, detail::krylov_options(opts));
  if (!gk.converged)
    throw RecoveryError("uk_find: bidiagonalization did not converge within " +
                            std::to_string(gk.history.steps()) + " steps and " +
                            std::to_string(gk.restarts) + " restarts",
                        gk.history);
  UnitaryFactorization uf = unitary_factors(gk.dense_bidiagonal(), opts.eps);

  StructuredDecomposition out;
  out.kind = StructureKind::unitary;
  out.G = gk.leftBasis * uf.G;
  out.B = gk.rightBasis * uf.B;
  out.base = A - out.G * out.B.adjoint();
  const RealVector sigmaQ = svd_values(out.base);
  double dev = 0.0;
  for (Eigen::Index i = 0; i < sigmaQ.size(); ++i)
    dev = std::max(dev, std::abs(sigmaQ(i) - 1.0));
  out.baseStructureError = dev;
  out.residual2 = spectral_norm(ComplexMatrix(A - out.base - out.G * out.B.adjoint()));
  out.history = std::move(gk.history);
  out.exhaustedSteps = gk.leftBasis.cols() == A.rows();
  out.restarts = gk.restarts;
  return out;
}

}  // namespace uplr
