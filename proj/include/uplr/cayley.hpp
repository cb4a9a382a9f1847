#pragma once

#include <Eigen/Eigenvalues>

#include "uplr/structure.hpp"

namespace uplr {

namespace detail {

/// Solve (A + shift I) X = RHS after verifying the shifted matrix is far enough
/// from singular; both operands here commute, which keeps left/right forms equal.
inline ComplexMatrix shifted_solve(const ComplexMatrix& A, Complex shift, const ComplexMatrix& rhs,
                                   const char* op) {
  ComplexMatrix shifted = A;
  shifted.diagonal().array() += shift;
  const RealVector sv = svd_values(shifted);
  const Eigen::Index n = sv.size();
  if (n == 0 || sv(n - 1) <= 1e-13 * std::max(sv(0), 1.0))
    throw SingularityError(std::string(op) + ": matrix has an eigenvalue within ~1e-13 of " +
                           (shift.imag() > 0 ? "-i" : (shift.imag() < 0 ? "+i" : "1")) +
                           ", shifted system is numerically singular");
  return Eigen::PartialPivLU<ComplexMatrix>(shifted).solve(rhs);
}

}  // namespace detail

/// Moebius map z -> (z - i) / (z + i): Hermitian matrices go to unitary ones,
/// preserving the width of any low-rank deviation. Excluded point: eigenvalue -i.
inline ComplexMatrix cayley(const ComplexMatrix& A) {
  detail::require_square(A, "cayley");
  detail::require_finite(A, "cayley");
  ComplexMatrix rhs = A;
  rhs.diagonal().array() -= Complex(0.0, 1.0);
  // (A - iI)(A + iI)^{-1} = (A + iI)^{-1}(A - iI): polynomials in A commute.
  return detail::shifted_solve(A, Complex(0.0, 1.0), rhs, "cayley");
}

/// Inverse map z -> i (1 + z) / (1 - z): unitary back to Hermitian, same width
/// preservation. Excluded point: eigenvalue 1.
inline ComplexMatrix inv_cayley(const ComplexMatrix& A) {
  detail::require_square(A, "inv_cayley");
  detail::require_finite(A, "inv_cayley");
  const Eigen::Index n = A.rows();
  ComplexMatrix rhs = Complex(0.0, 1.0) * (ComplexMatrix::Identity(n, n) + A);
  return detail::shifted_solve(ComplexMatrix(-A), Complex(1.0, 0.0), rhs, "inv_cayley");
}

/// Consistency report between the two detection routes: the unitary-side count
/// on A against the Hermitian-side count on the Cayley preimage of a rotated
/// copy xi * A, with xi chosen on a 32-point unimodular grid to keep the
/// spectrum away from the excluded point 1. Also cross-checks the sign counts
/// of eig(A A^* - I) against the singular values of A at matched thresholds.
struct CayleyCrossCheck {
  Complex xi{1.0, 0.0};
  double spectrumGap = 0.0;  ///< min distance from spec(xi A) to 1, maximized over the grid
  bool conclusive = false;   ///< false when every xi leaves the spectrum near 1
  int rankU = 0;             ///< unitary-side width of A
  int rankHOfPreimage = 0;   ///< Hermitian-side width of inv_cayley(xi A)
  bool ranksAgree = false;
  int eigAbove = 0, eigBelow = 0;  ///< sign counts of eig(A A^* - I) outside the band
  int svAbove = 0, svBelow = 0;    ///< singular values of A outside the matched band
  bool signCountsMatch = false;
};

inline CayleyCrossCheck cayley_cross_check(const ComplexMatrix& A, double tau = kDefaultTau) {
  detail::require_square(A, "cayley_cross_check");
  detail::require_finite(A, "cayley_cross_check");
  const Eigen::Index n = A.rows();
  CayleyCrossCheck out;

  Eigen::ComplexEigenSolver<ComplexMatrix> es(A, false);
  if (es.info() != Eigen::Success)
    throw DecompositionError("cayley_cross_check: eigenvalue iteration did not converge");
  const ComplexVector lambda = es.eigenvalues();
  for (int j = 0; j < 32; ++j) {
    const double angle = 2.0 * M_PI * j / 32.0;
    const Complex xi(std::cos(angle), std::sin(angle));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) gap = std::min(gap, std::abs(xi * lambda(i) - 1.0));
    if (gap > out.spectrumGap) {
      out.spectrumGap = gap;
      out.xi = xi;
    }
  }
  const double normA = spectral_norm_estimate(A);
  out.conclusive =
      out.spectrumGap > 100.0 * n * std::numeric_limits<double>::epsilon() * (1.0 + normA);

  out.rankU = unitary_min_rank(A, tau);
  if (out.conclusive) {
    out.rankHOfPreimage = hermitian_min_rank(inv_cayley(ComplexMatrix(out.xi * A)));
    out.ranksAgree = out.rankU == out.rankHOfPreimage;
  }

  // Matched bands: sigma > 1 + tau  <=>  sigma^2 - 1 > 2 tau + tau^2.
  const double tolEig = 2.0 * tau + tau * tau;
  const ComplexMatrix gram = A * A.adjoint() - ComplexMatrix::Identity(n, n);
  const RealVector ev = herm_eig(gram).lambda;
  auto [ea, eb] = detail::band_counts(ev, 0.0, tolEig);
  out.eigAbove = ea;
  out.eigBelow = eb;
  auto [sa, sb] = detail::band_counts(svd_values(A), 1.0, tau);
  out.svAbove = sa;
  out.svBelow = sb;
  out.signCountsMatch = ea == sa && eb == sb;
  return out;
}

}  // namespace uplr
