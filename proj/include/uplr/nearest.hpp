#pragma once

#include "uplr/structure.hpp"

namespace uplr {

/// Nearest matrix of the requested class, optimal in the spectral and the
/// Frobenius norm simultaneously (one canonical minimizer serves both).
struct NearestResult {
  ComplexMatrix nearest;
  double dist2 = 0.0;
  double distFro = 0.0;
  std::vector<int> snappedIndices;  ///< 1-based positions in the non-increasing spectrum
  int kPlus = 0, kMinus = 0;        ///< dead-band counts of the relevant spectrum
};

/// Distances to both classes for every admissible width k = 0..n.
struct DistanceProfile {
  RealVector dist2U, distFroU;  ///< size n+1, entry [k]
  RealVector dist2H, distFroH;
};

namespace detail {

/// Indices to flatten toward the pivot for target width k: positions
/// (k, kPlus] and (n - kMinus, n - k] of the sorted spectrum (1-based).
inline std::vector<int> snap_positions(Eigen::Index n, int k, int kPlus, int kMinus) {
  std::vector<int> snapped;
  for (int i = k + 1; i <= kPlus; ++i) snapped.push_back(i);
  for (int i = static_cast<int>(n) - kMinus + 1; i <= static_cast<int>(n) - k; ++i)
    snapped.push_back(i);
  return snapped;
}

}  // namespace detail

/// Nearest unitary-plus-rank-k matrix: supernumerary singular values are set to 1
/// in the SVD. dist2 = max over snapped |sigma_i - 1| (equivalently
/// max(0, sigma_{k+1} - 1, 1 - sigma_{n-k}) with dead-band counting), distFro is
/// the root sum of squares of the same deviations.
inline NearestResult nearest_unitary(const ComplexMatrix& A, int k, double tau = kDefaultTau) {
  detail::require_square(A, "nearest_unitary");
  detail::require_finite(A, "nearest_unitary");
  const Eigen::Index n = A.rows();
  detail::require(k >= 0 && k <= n, "nearest_unitary: k must lie in [0, n]");
  detail::require(tau >= 0, "nearest_unitary: tau must be non-negative");

  SvdResult dec = svd(A);
  auto [kPlus, kMinus] = detail::band_counts(dec.sigma, 1.0, tau);
  NearestResult out;
  out.kPlus = kPlus;
  out.kMinus = kMinus;
  out.snappedIndices = detail::snap_positions(n, k, kPlus, kMinus);
  if (out.snappedIndices.empty()) {  // already in the class: return A unchanged
    out.nearest = A;
    return out;
  }
  RealVector sigmaHat = dec.sigma;
  double maxDev = 0.0, sumSq = 0.0;
  for (int pos : out.snappedIndices) {
    const double dev = dec.sigma(pos - 1) - 1.0;
    maxDev = std::max(maxDev, std::abs(dev));
    sumSq += dev * dev;
    sigmaHat(pos - 1) = 1.0;
  }
  out.dist2 = maxDev;
  out.distFro = std::sqrt(sumSq);
  out.nearest = dec.left * sigmaHat.asDiagonal() * dec.right.adjoint();
  return out;
}

/// Nearest Hermitian-plus-rank-k matrix: supernumerary eigenvalues of the skew
/// part are zeroed, i.e. nearest = A - i * U (D - D_hat) U^*.
inline NearestResult nearest_hermitian(const ComplexMatrix& A, int k, double tauH = kDefaultTauH) {
  detail::require_square(A, "nearest_hermitian");
  detail::require_finite(A, "nearest_hermitian");
  const Eigen::Index n = A.rows();
  detail::require(k >= 0 && k <= n, "nearest_hermitian: k must lie in [0, n]");
  detail::require(tauH >= 0, "nearest_hermitian: tauH must be non-negative");

  HermEigResult eig = herm_eig(skew_part(A));
  const double s = n == 0 ? 0.0 : std::max(std::abs(eig.lambda(0)), std::abs(eig.lambda(n - 1)));
  auto [kPlus, kMinus] =
      s == 0.0 ? std::pair<int, int>{0, 0} : detail::band_counts(eig.lambda, 0.0, tauH * s);
  NearestResult out;
  out.kPlus = kPlus;
  out.kMinus = kMinus;
  out.snappedIndices = detail::snap_positions(n, k, kPlus, kMinus);
  if (out.snappedIndices.empty()) {
    out.nearest = A;
    return out;
  }
  RealVector removed = RealVector::Zero(n);
  double maxDev = 0.0, sumSq = 0.0;
  for (int pos : out.snappedIndices) {
    const double lam = eig.lambda(pos - 1);
    removed(pos - 1) = lam;
    maxDev = std::max(maxDev, std::abs(lam));
    sumSq += lam * lam;
  }
  out.dist2 = maxDev;
  out.distFro = std::sqrt(sumSq);
  out.nearest =
      A - Complex(0.0, 1.0) * (eig.basis * removed.asDiagonal() * eig.basis.adjoint());
  return out;
}

/// All four distance curves from one SVD and one skew-part eigendecomposition.
inline DistanceProfile distance_profile(const ComplexMatrix& A, double tau = kDefaultTau,
                                        double tauH = kDefaultTauH) {
  detail::require_square(A, "distance_profile");
  detail::require_finite(A, "distance_profile");
  const Eigen::Index n = A.rows();
  DistanceProfile prof;
  prof.dist2U = RealVector::Zero(n + 1);
  prof.distFroU = RealVector::Zero(n + 1);
  prof.dist2H = RealVector::Zero(n + 1);
  prof.distFroH = RealVector::Zero(n + 1);

  const RealVector sigma = svd_values(A);
  auto [kPlusU, kMinusU] = detail::band_counts(sigma, 1.0, tau);
  HermEigResult eig = herm_eig(skew_part(A));
  const double s = n == 0 ? 0.0 : std::max(std::abs(eig.lambda(0)), std::abs(eig.lambda(n - 1)));
  auto [kPlusH, kMinusH] =
      s == 0.0 ? std::pair<int, int>{0, 0} : detail::band_counts(eig.lambda, 0.0, tauH * s);

  for (int k = 0; k <= n; ++k) {
    double maxU = 0.0, sumU = 0.0, maxH = 0.0, sumH = 0.0;
    for (int pos : detail::snap_positions(n, k, kPlusU, kMinusU)) {
      const double dev = sigma(pos - 1) - 1.0;
      maxU = std::max(maxU, std::abs(dev));
      sumU += dev * dev;
    }
    for (int pos : detail::snap_positions(n, k, kPlusH, kMinusH)) {
      const double lam = eig.lambda(pos - 1);
      maxH = std::max(maxH, std::abs(lam));
      sumH += lam * lam;
    }
    prof.dist2U(k) = maxU;
    prof.distFroU(k) = std::sqrt(sumU);
    prof.dist2H(k) = maxH;
    prof.distFroH(k) = std::sqrt(sumH);
  }
  return prof;
}

}  // namespace uplr
