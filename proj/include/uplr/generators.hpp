#pragma once

#include <cstdint>

#include "uplr/random.hpp"
#include "uplr/types.hpp"

namespace uplr {

/// Monic polynomial p(x) = x^n - sum_{i=0}^{n-1} coeffs[i] * x^i.
struct MonicPoly {
  std::vector<Complex> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()); }
};

/// Matrix polynomial in the Chebyshev basis, sum_{j=0}^{d} blocks[j] * T_j(x),
/// with square real m x m blocks and blocks[d] = I.
struct ChebBlockPoly {
  std::vector<RealMatrix> blocks;

  int d() const { return static_cast<int>(blocks.size()) - 1; }
  Eigen::Index m() const { return blocks.empty() ? 0 : blocks.front().rows(); }
};

/// Hermitian matrix plus a planted rank-k correction with known factors:
/// A = H + G B^*, correction singular values log-spaced in [sigmaMin, 1].
struct PlantedHermitian {
  ComplexMatrix A, H, G, B;
  RealVector plantedSigma;
};

/// Unitary matrix plus a planted rank-k correction, same correction model.
struct PlantedUnitary {
  ComplexMatrix A, Q, G, B;
  RealVector plantedSigma;
};

/// k singular values 10^t with t equally spaced from 0 down to log10(sigmaMin);
/// the largest is exactly 1 and the smallest exactly sigmaMin (k >= 2).
inline RealVector log_spaced_sigmas(int k, double sigmaMin) {
  detail::require(k >= 0, "log_spaced_sigmas: k must be non-negative");
  detail::require(sigmaMin > 0 && sigmaMin <= 1, "log_spaced_sigmas: need 0 < sigmaMin <= 1");
  RealVector sv(k);
  if (k == 1) {
    sv(0) = 1.0;
    return sv;
  }
  const double lo = std::log10(sigmaMin);
  for (int j = 0; j < k; ++j) sv(j) = std::pow(10.0, lo * j / (k - 1));
  if (k >= 1) sv(k - 1) = sigmaMin;  // pin the endpoint exactly
  return sv;
}

inline PlantedHermitian random_hermitian_plus_rank(Eigen::Index n, int k, double sigmaMin,
                                                   unsigned long long seed = kDefaultSeed) {
  detail::require(n >= 1 && k >= 0 && k <= n, "random_hermitian_plus_rank: need 0 <= k <= n");
  Rng rng(seed);
  PlantedHermitian out;
  out.H = random_hermitian(n, rng);
  out.plantedSigma = log_spaced_sigmas(k, sigmaMin);
  const ComplexMatrix U = random_orthonormal(n, k, rng);
  const ComplexMatrix V = random_orthonormal(n, k, rng);
  out.G = U * out.plantedSigma.asDiagonal();
  out.B = V;
  out.A = out.H + out.G * out.B.adjoint();
  return out;
}

inline PlantedUnitary random_unitary_plus_rank(Eigen::Index n, int k, double sigmaMin,
                                               unsigned long long seed = kDefaultSeed) {
  detail::require(n >= 1 && k >= 0 && k <= n, "random_unitary_plus_rank: need 0 <= k <= n");
  Rng rng(seed);
  PlantedUnitary out;
  out.Q = random_unitary(n, rng);
  out.plantedSigma = log_spaced_sigmas(k, sigmaMin);
  const ComplexMatrix U = random_orthonormal(n, k, rng);
  const ComplexMatrix V = random_orthonormal(n, k, rng);
  out.G = U * out.plantedSigma.asDiagonal();
  out.B = V;
  out.A = out.Q + out.G * out.B.adjoint();
  return out;
}

/// Monic polynomial with independent standard complex normal lower coefficients.
inline MonicPoly random_monic(int n, unsigned long long seed = kDefaultSeed) {
  detail::require(n >= 1, "random_monic: degree must be positive");
  Rng rng(seed);
  MonicPoly p;
  p.coeffs.resize(static_cast<std::size_t>(n));
  for (auto& c : p.coeffs) c = rng.gaussian_complex();
  return p;
}

/// Expand prod_j (x - roots[j]) into the monic convention above.
inline MonicPoly poly_from_roots(const std::vector<Complex>& roots) {
  detail::require(!roots.empty(), "poly_from_roots: need at least one root");
  std::vector<Complex> c = {Complex(1.0, 0.0)};  // standard-basis coefficients, low to high
  for (Complex r : roots) {
    std::vector<Complex> nc(c.size() + 1, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= r * c[i];
    }
    c = std::move(nc);
  }
  MonicPoly p;
  p.coeffs.resize(c.size() - 1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) p.coeffs[i] = -c[i];
  return p;
}

/// Monic polynomial with independent standard normal *real* roots.
inline MonicPoly random_roots_poly(int n, unsigned long long seed = kDefaultSeed) {
  detail::require(n >= 1, "random_roots_poly: degree must be positive");
  Rng rng(seed);
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (auto& r : roots) r = Complex(rng.gaussian(), 0.0);
  return poly_from_roots(roots);
}

/// Frobenius companion matrix: first row (p_{n-1}, ..., p_0), identity subdiagonal.
inline ComplexMatrix companion(const MonicPoly& p) {
  const int n = p.degree();
  detail::require(n >= 1, "companion: degree must be positive");
  ComplexMatrix C = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) C(0, j) = p.coeffs[static_cast<std::size_t>(n - 1 - j)];
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  detail::require_finite(C, "companion");
  return C;
}

/// Pentadiagonal companion form assembled as the product of elementary factors,
/// odd-indexed ones first: F = (F_1 F_3 ...) (F_0 F_2 ...), where F_0 replaces
/// the leading 1 by p_0 and F_i embeds [[0, 1], [1, p_i]] at rows i, i+1.
inline ComplexMatrix fiedler_pentadiagonal(const MonicPoly& p) {
  const int n = p.degree();
  detail::require(n >= 1, "fiedler_pentadiagonal: degree must be positive");
  if (n == 1) {
    ComplexMatrix F(1, 1);
    F(0, 0) = p.coeffs[0];
    return F;
  }
  auto factor = [&](int i) {
    ComplexMatrix F = ComplexMatrix::Identity(n, n);
    if (i == 0) {
      F(0, 0) = p.coeffs[0];
    } else {
      F(i - 1, i - 1) = 0.0;
      F(i - 1, i) = 1.0;
      F(i, i - 1) = 1.0;
      F(i, i) = p.coeffs[static_cast<std::size_t>(i)];
    }
    return F;
  };
  ComplexMatrix odd = ComplexMatrix::Identity(n, n);
  for (int i = 1; i < n; i += 2) odd = odd * factor(i);
  ComplexMatrix even = factor(0);
  for (int i = 2; i < n; i += 2) even = even * factor(i);
  ComplexMatrix F = odd * even;
  detail::require_finite(F, "fiedler_pentadiagonal");
  return F;
}

/// Wilkinson polynomial prod_{j=1}^{n} (x - j), expanded in exact integer
/// arithmetic. Errors once any coefficient magnitude exceeds 2^53 and can no
/// longer be represented exactly in double (first happens at n = 18).
inline MonicPoly wilkinson(int n) {
  detail::require(n >= 1, "wilkinson: degree must be positive");
  std::vector<__int128> c = {1};
  const __int128 limit = static_cast<__int128>(1) << 53;
  for (int j = 1; j <= n; ++j) {
    std::vector<__int128> nc(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= static_cast<__int128>(j) * c[i];
    }
    c = std::move(nc);
    for (__int128 v : c)
      if (v > limit || -v > limit)
        throw OverflowError("wilkinson: coefficient exceeds 2^53 at degree " + std::to_string(n) +
                            " (root factor " + std::to_string(j) +
                            "); exact double conversion impossible");
  }
  MonicPoly p;
  p.coeffs.resize(c.size() - 1);
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    p.coeffs[i] = Complex(-static_cast<double>(static_cast<long long>(c[i])), 0.0);
  return p;
}

/// Colleague linearization of a Chebyshev-basis matrix polynomial (blocks
/// P_0..P_d, P_d = I): block structure
///   [ Ph_1  Ph_2 ... Ph_d ]
///   [ I/2    0   I/2      ]
///   [      ...  ...  ...  ]
///   [            I    0   ]
/// with first-row blocks Ph_1 = -P_{d-1}/2, Ph_2 = (I - P_{d-2})/2,
/// Ph_j = -P_{d-j}/2 for j >= 3, so that eigenvalues are the polynomial's
/// eigenvalues. With `scaled`, the last block row/column group is rescaled by
/// sqrt(2), which symmetrizes the corner and confines the skew part to the
/// first block row and column (Hermitian-plus-rank-m instead of rank-2m).
inline ComplexMatrix colleague(const ChebBlockPoly& P, bool scaled = false) {
  const int d = P.d();
  detail::require(d >= 2, "colleague: need degree d >= 2");
  const Eigen::Index m = P.m();
  detail::require(m >= 1, "colleague: empty coefficient blocks");
  for (const RealMatrix& blk : P.blocks)
    detail::require(blk.rows() == m && blk.cols() == m,
                    "colleague: coefficient blocks must all be m x m");
  detail::require(P.blocks.back().isApprox(RealMatrix::Identity(m, m), 1e-14),
                  "colleague: leading block must be the identity (monic normalization)");

  const Eigen::Index n = static_cast<Eigen::Index>(d) * m;
  ComplexMatrix C = ComplexMatrix::Zero(n, n);
  for (int j = 1; j <= d; ++j) {
    RealMatrix blk = -0.5 * P.blocks[static_cast<std::size_t>(d - j)];
    if (j == 2) blk += 0.5 * RealMatrix::Identity(m, m);
    C.block(0, (j - 1) * m, m, m) = blk.cast<Complex>();
  }
  for (int i = 1; i + 1 < d; ++i) {
    C.block(i * m, (i - 1) * m, m, m) = 0.5 * ComplexMatrix::Identity(m, m);
    C.block(i * m, (i + 1) * m, m, m) = 0.5 * ComplexMatrix::Identity(m, m);
  }
  C.block((d - 1) * m, (d - 2) * m, m, m) = ComplexMatrix::Identity(m, m);
  if (scaled) {
    const double r = std::sqrt(2.0);
    C.block((d - 1) * m, 0, m, n) /= r;   // D^{-1} C D with D = diag(I, ..., I, sqrt(2) I)
    C.block(0, (d - 1) * m, n, m) *= r;
  }
  return C;
}

/// Random Chebyshev coefficient blocks (standard normal), monic-normalized.
inline ChebBlockPoly random_cheb_blocks(int d, Eigen::Index m,
                                        unsigned long long seed = kDefaultSeed) {
  detail::require(d >= 2 && m >= 1, "random_cheb_blocks: need d >= 2 and m >= 1");
  Rng rng(seed);
  ChebBlockPoly P;
  P.blocks.resize(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j < d; ++j) {
    RealMatrix blk(m, m);
    for (Eigen::Index cc = 0; cc < m; ++cc)
      for (Eigen::Index rr = 0; rr < m; ++rr) blk(rr, cc) = rng.gaussian();
    P.blocks[static_cast<std::size_t>(j)] = blk;
  }
  P.blocks[static_cast<std::size_t>(d)] = RealMatrix::Identity(m, m);
  return P;
}

/// Rewrite a monic scalar polynomial in the Chebyshev basis (m = 1 blocks),
/// normalized so the leading Chebyshev coefficient is 1.
inline ChebBlockPoly cheb_from_monic(const MonicPoly& p) {
  const int d = p.degree();
  detail::require(d >= 2, "cheb_from_monic: need degree >= 2");
  // rep[k] = Chebyshev coefficients of x^k, via x T_0 = T_1, x T_j = (T_{j+1} + T_{j-1}) / 2.
  std::vector<std::vector<Complex>> rep(static_cast<std::size_t>(d) + 1);
  rep[0] = {Complex(1.0, 0.0)};
  for (int kk = 1; kk <= d; ++kk) {
    const auto& prev = rep[static_cast<std::size_t>(kk - 1)];
    std::vector<Complex> r(static_cast<std::size_t>(kk) + 1, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (prev[j] == Complex(0.0, 0.0)) continue;
      if (j == 0)
        r[1] += prev[j];
      else {
        r[j + 1] += 0.5 * prev[j];
        r[j - 1] += 0.5 * prev[j];
      }
    }
    rep[static_cast<std::size_t>(kk)] = std::move(r);
  }
  std::vector<Complex> a(static_cast<std::size_t>(d) + 1, Complex(0.0, 0.0));
  for (int kk = 0; kk <= d; ++kk) {
    const Complex coeff = kk == d ? Complex(1.0, 0.0) : -p.coeffs[static_cast<std::size_t>(kk)];
    for (std::size_t j = 0; j < rep[static_cast<std::size_t>(kk)].size(); ++j)
      a[j] += coeff * rep[static_cast<std::size_t>(kk)][j];
  }
  const Complex lead = a.back();
  detail::require(std::abs(lead) > 0, "cheb_from_monic: zero leading coefficient");
  ChebBlockPoly P;
  P.blocks.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    detail::require(std::abs((a[j] / lead).imag()) < 1e-12,
                    "cheb_from_monic: polynomial must have real Chebyshev coefficients");
    P.blocks[j] = RealMatrix::Constant(1, 1, (a[j] / lead).real());
  }
  P.blocks.back() = RealMatrix::Identity(1, 1);
  return P;
}

}  // namespace uplr
