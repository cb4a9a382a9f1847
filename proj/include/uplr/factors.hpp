#pragma once

#include "uplr/kernels.hpp"
#include "uplr/types.hpp"

namespace uplr {

/// Closed-form split of diag(s1, s2) with s1 >= 1 >= s2 >= 0 into a plane
/// rotation plus a rank-one correction:
///   diag(s1, s2) = [[c, s], [-s, c]] + g * b^T,  g = (sqrt(a), sqrt(b))^T,
///   b = (sqrt(a), -sqrt(b))^T.
struct Split2x2Unitary {
  double c = 1.0, s = 0.0;  ///< rotation entries, c^2 + s^2 = 1
  double a = 0.0, b = 0.0;  ///< correction weights, s^2 = a * b

  Eigen::Matrix2d rotation() const {
    Eigen::Matrix2d Q;
    Q << c, s, -s, c;
    return Q;
  }
  Eigen::Vector2d g() const { return {std::sqrt(a), std::sqrt(b)}; }
  Eigen::Vector2d bvec() const { return {std::sqrt(a), -std::sqrt(b)}; }
};

inline Split2x2Unitary split2x2_unitary(double s1, double s2) {
  detail::require(s1 >= 1.0 && s2 <= 1.0 && s2 >= 0.0,
                  "split2x2_unitary: need s1 >= 1 >= s2 >= 0");
  Split2x2Unitary out;
  const double denom = s1 + s2;
  if (denom == 0.0) {  // s1 = 1, s2 = 0 is excluded by s1 >= 1, so denom > 0 always
    out.c = 1.0;
    return out;
  }
  out.c = (s1 * s2 + 1.0) / denom;
  out.a = (s1 * s1 - 1.0) / denom;
  out.b = (1.0 - s2 * s2) / denom;
  out.s = std::sqrt(out.a * out.b);
  return out;
}

/// Closed-form split of diag(l1, l2) with l1 >= 0 >= l2 into a symmetric
/// rank-two product: diag(l1, l2) = b * c^T + c * b^T.
struct Split2x2Hermitian {
  Eigen::Vector2d b, c;
};

inline Split2x2Hermitian split2x2_hermitian(double l1, double l2) {
  detail::require(l1 >= 0.0 && l2 <= 0.0, "split2x2_hermitian: need l1 >= 0 >= l2");
  const double r1 = std::sqrt(l1), r2 = std::sqrt(-l2);
  Split2x2Hermitian out;
  out.b = {0.5 * r1, -0.5 * r2};
  out.c = {r1, r2};
  return out;
}

/// Pairing plan over a non-increasing spectrum: values above pivot + tol pair
/// greedily (largest above with smallest below) with values below pivot - tol;
/// the surplus side keeps singles; the dead band is neutral. Indices are
/// 0-based positions into the sorted input.
struct BlockPlan {
  double pivot = 0.0, tol = 0.0;
  int kPlus = 0, kMinus = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
  std::vector<int> neutral;

  int width() const { return static_cast<int>(pairs.size() + singles.size()); }
};

inline BlockPlan pair_blocks(const RealVector& values, double pivot, double tol) {
  detail::require(tol >= 0, "pair_blocks: tol must be non-negative");
  const Eigen::Index n = values.size();
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    detail::require(values(i) >= values(i + 1), "pair_blocks: values must be non-increasing");
  BlockPlan plan;
  plan.pivot = pivot;
  plan.tol = tol;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values(i) > pivot + tol)
      ++plan.kPlus;
    else if (values(i) < pivot - tol)
      ++plan.kMinus;
  }
  const int h = std::min(plan.kPlus, plan.kMinus);
  for (int j = 0; j < h; ++j)
    plan.pairs.emplace_back(j, static_cast<int>(n) - 1 - j);
  for (int j = h; j < plan.kPlus; ++j) plan.singles.push_back(j);
  for (int j = h; j < plan.kMinus; ++j)
    plan.singles.push_back(static_cast<int>(n) - 1 - j);
  std::sort(plan.singles.begin(), plan.singles.end());
  for (int j = plan.kPlus; j < static_cast<int>(n) - plan.kMinus; ++j) plan.neutral.push_back(j);
  return plan;
}

/// Factored form M = base + G * B^* with base unitary (up to the neglected
/// dead-band mass) and G, B of width max(kPlus, kMinus) at tolerance eps
/// (absolute around sigma = 1).
struct UnitaryFactorization {
  ComplexMatrix base;  ///< unitary factor Q
  ComplexMatrix G, B;
  BlockPlan plan;
  RealVector sigma;

  int width() const { return static_cast<int>(G.cols()); }
};

inline UnitaryFactorization unitary_factors(const ComplexMatrix& M, double eps = kDefaultEps) {
  detail::require_square(M, "unitary_factors");
  detail::require_finite(M, "unitary_factors");
  detail::require(eps > 0, "unitary_factors: eps must be positive");
  const Eigen::Index n = M.rows();
  SvdResult dec = svd(M);
  BlockPlan plan = pair_blocks(dec.sigma, 1.0, eps);
  const int width = plan.width();

  RealMatrix Qc = RealMatrix::Identity(n, n);
  RealMatrix Ghat = RealMatrix::Zero(n, width);
  RealMatrix Bhat = RealMatrix::Zero(n, width);
  int col = 0;
  for (auto [i, j] : plan.pairs) {
    Split2x2Unitary sp = split2x2_unitary(dec.sigma(i), dec.sigma(j));
    Qc(i, i) = Qc(j, j) = sp.c;
    Qc(i, j) = sp.s;
    Qc(j, i) = -sp.s;
    Ghat(i, col) = std::sqrt(sp.a);
    Ghat(j, col) = std::sqrt(sp.b);
    Bhat(i, col) = std::sqrt(sp.a);
    Bhat(j, col) = -std::sqrt(sp.b);
    ++col;
  }
  for (int i : plan.singles) {  // sigma = 1 + (sigma - 1), unimodular part fixed to 1
    Ghat(i, col) = dec.sigma(i) - 1.0;
    Bhat(i, col) = 1.0;
    ++col;
  }

  UnitaryFactorization out;
  out.base = dec.left * Qc * dec.right.adjoint();
  out.G = dec.left * Ghat;
  out.B = dec.right * Bhat;
  out.plan = std::move(plan);
  out.sigma = std::move(dec.sigma);
  return out;
}

/// Factored form T = B * C^* + C * B^* for Hermitian T, width max(kPlus, kMinus)
/// at tolerance eps * ||T|| (relative around lambda = 0).
struct HermitianFactorization {
  ComplexMatrix B, C;
  BlockPlan plan;
  RealVector lambda;

  int width() const { return static_cast<int>(B.cols()); }
};

inline HermitianFactorization hermitian_factors(const ComplexMatrix& T, double eps = kDefaultEps) {
  detail::require_square(T, "hermitian_factors");
  detail::require_finite(T, "hermitian_factors");
  detail::require(eps > 0, "hermitian_factors: eps must be positive");
  const Eigen::Index n = T.rows();
  HermEigResult eig = herm_eig(T);
  const double normT =
      n == 0 ? 0.0 : std::max(std::abs(eig.lambda(0)), std::abs(eig.lambda(n - 1)));
  BlockPlan plan = pair_blocks(eig.lambda, 0.0, eps * normT);
  const int width = plan.width();

  RealMatrix Bhat = RealMatrix::Zero(n, width);
  RealMatrix Chat = RealMatrix::Zero(n, width);
  int col = 0;
  for (auto [i, j] : plan.pairs) {
    Split2x2Hermitian sp = split2x2_hermitian(eig.lambda(i), eig.lambda(j));
    Bhat(i, col) = sp.b(0);
    Bhat(j, col) = sp.b(1);
    Chat(i, col) = sp.c(0);
    Chat(j, col) = sp.c(1);
    ++col;
  }
  for (int i : plan.singles) {  // lambda = b * conj(c) + c * conj(b) with b = lambda, c = 1/2
    Bhat(i, col) = eig.lambda(i);
    Chat(i, col) = 0.5;
    ++col;
  }

  HermitianFactorization out;
  out.B = eig.basis * Bhat;
  out.C = eig.basis * Chat;
  out.plan = std::move(plan);
  out.lambda = std::move(eig.lambda);
  return out;
}

}  // namespace uplr
