#pragma once

#include "uplr/kernels.hpp"
#include "uplr/types.hpp"

namespace uplr {

/// Skew part S(A) = (A - A^*) / (2i); Hermitian, zero iff A is Hermitian.
inline ComplexMatrix skew_part(const ComplexMatrix& A) {
  detail::require_square(A, "skew_part");
  detail::require_finite(A, "skew_part");
  return (A - A.adjoint()) / Complex(0.0, 2.0);
}

/// Counting report for both structure classes on one matrix.
///
/// A matrix is unitary-plus-rank-k exactly when at most k singular values lie
/// above 1 and at most k below; Hermitian-plus-rank-k exactly when the skew
/// part has at most k positive and at most k negative eigenvalues. The minimal
/// width is max of the two counts on each side.
struct StructureReport {
  Eigen::Index n = 0;
  double tau = kDefaultTau;    ///< absolute dead-band half-width around sigma = 1
  double tauH = kDefaultTauH;  ///< dead-band around lambda = 0, relative to ||S(A)||
  int kPlusU = 0, kMinusU = 0, minRankU = 0;
  int kPlusH = 0, kMinusH = 0, minRankH = 0;
  RealVector sigma;       ///< singular values of A, non-increasing
  RealVector skewLambda;  ///< eigenvalues of S(A), non-increasing
  double skewNorm = 0.0;  ///< ||S(A)||_2 = max |skewLambda|
};

namespace detail {

/// Ties at exactly pivot +/- tol resolve toward "equal" (strict comparisons).
inline std::pair<int, int> band_counts(const RealVector& values, double pivot, double tol) {
  int above = 0, below = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > pivot + tol)
      ++above;
    else if (values(i) < pivot - tol)
      ++below;
  }
  return {above, below};
}

}  // namespace detail

/// Minimal k such that A is unitary-plus-rank-k, at dead band tau around 1.
inline int unitary_min_rank(const ComplexMatrix& A, double tau = kDefaultTau) {
  detail::require_square(A, "unitary_min_rank");
  detail::require_finite(A, "unitary_min_rank");
  detail::require(tau >= 0, "unitary_min_rank: tau must be non-negative");
  auto [above, below] = detail::band_counts(svd_values(A), 1.0, tau);
  return std::max(above, below);
}

/// Minimal k such that A is Hermitian-plus-rank-k, at dead band tauH * ||S(A)||.
inline int hermitian_min_rank(const ComplexMatrix& A, double tauH = kDefaultTauH) {
  detail::require_square(A, "hermitian_min_rank");
  detail::require_finite(A, "hermitian_min_rank");
  detail::require(tauH >= 0, "hermitian_min_rank: tauH must be non-negative");
  HermEigResult eig = herm_eig(skew_part(A));
  const Eigen::Index n = eig.lambda.size();
  const double s = n == 0 ? 0.0 : std::max(std::abs(eig.lambda(0)), std::abs(eig.lambda(n - 1)));
  if (s == 0.0) return 0;
  auto [above, below] = detail::band_counts(eig.lambda, 0.0, tauH * s);
  return std::max(above, below);
}

/// Full report: both spectra, both count pairs, both minimal widths.
inline StructureReport structure_report(const ComplexMatrix& A, double tau = kDefaultTau,
                                        double tauH = kDefaultTauH) {
  detail::require_square(A, "structure_report");
  detail::require_finite(A, "structure_report");
  detail::require(tau >= 0 && tauH >= 0, "structure_report: tolerances must be non-negative");
  StructureReport rep;
  rep.n = A.rows();
  rep.tau = tau;
  rep.tauH = tauH;
  rep.sigma = svd_values(A);
  auto [aboveU, belowU] = detail::band_counts(rep.sigma, 1.0, tau);
  rep.kPlusU = aboveU;
  rep.kMinusU = belowU;
  rep.minRankU = std::max(aboveU, belowU);

  HermEigResult eig = herm_eig(skew_part(A));
  rep.skewLambda = eig.lambda;
  rep.skewNorm = rep.n == 0
                     ? 0.0
                     : std::max(std::abs(eig.lambda(0)), std::abs(eig.lambda(rep.n - 1)));
  if (rep.skewNorm > 0.0) {
    auto [aboveH, belowH] = detail::band_counts(rep.skewLambda, 0.0, tauH * rep.skewNorm);
    rep.kPlusH = aboveH;
    rep.kMinusH = belowH;
    rep.minRankH = std::max(aboveH, belowH);
  }
  return rep;
}

}  // namespace uplr
