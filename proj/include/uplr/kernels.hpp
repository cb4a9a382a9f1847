#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>

#include "uplr/random.hpp"
#include "uplr/types.hpp"

namespace uplr {

/// Full singular value decomposition A = left * diag(sigma) * right^*.
/// sigma is non-increasing; left and right are square unitary.
struct SvdResult {
  ComplexMatrix left;
  RealVector sigma;
  ComplexMatrix right;
};

/// Hermitian eigendecomposition S = basis * diag(lambda) * basis^*, lambda non-increasing.
struct HermEigResult {
  ComplexMatrix basis;
  RealVector lambda;
};

/// Options shared by the two Krylov iterations.
struct KrylovOptions {
  double eps = kDefaultEps;  ///< breakdown threshold, relative to the operator norm
  int maxSteps = -1;         ///< cap on basis size; -1 means the full dimension n
  unsigned long long seed = kDefaultSeed;
  int maxRestarts = 5;  ///< random restarts allowed after premature breakdowns
  std::optional<ComplexVector> start;
};

/// Lanczos tridiagonalization of a Hermitian operator: S ~ basis * T * basis^*
/// with T = tridiag(beta; alpha; beta). history holds every trailing coupling
/// |T_{i+1,i}| as produced, including the final sub-threshold one.
struct LanczosResult {
  ComplexMatrix basis;
  RealVector alpha;  ///< diagonal of T, size m
  RealVector beta;   ///< subdiagonal of T, size m-1 (near-zero across restart seams)
  ConvergenceHistory history;
  bool converged = false;
  int restarts = 0;

  ComplexMatrix dense_tridiagonal() const {
    const Eigen::Index m = alpha.size();
    ComplexMatrix T = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) T(i, i) = alpha(i);
    for (Eigen::Index i = 0; i + 1 < m; ++i) T(i + 1, i) = T(i, i + 1) = beta(i);
    return T;
  }
};

/// Golub-Kahan bidiagonalization A * rightBasis = leftBasis * M with M upper
/// bidiagonal (diag alpha, superdiag beta). history holds the superdiagonal
/// couplings per step, including the terminating sub-threshold one.
struct BidiagResult {
  ComplexMatrix leftBasis;
  RealVector alpha;  ///< diagonal of M, size m
  RealVector beta;   ///< superdiagonal of M, size m-1
  ComplexMatrix rightBasis;
  ConvergenceHistory history;
  bool converged = false;
  int restarts = 0;

  ComplexMatrix dense_bidiagonal() const {
    const Eigen::Index m = alpha.size();
    ComplexMatrix M = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) M(i, i) = alpha(i);
    for (Eigen::Index i = 0; i + 1 < m; ++i) M(i, i + 1) = beta(i);
    return M;
  }
};

namespace detail {

/// Deterministic 20-step power iteration estimating the spectral norm of a
/// linear operator given by `apply` (x -> A^* A x is formed via two callbacks).
inline double power_norm_estimate(Eigen::Index n,
                                  const std::function<ComplexVector(const ComplexVector&)>& apply,
                                  const std::function<ComplexVector(const ComplexVector&)>& applyAdjoint) {
  if (n == 0) return 0.0;
  Rng rng(0x9E3779B97F4A7C15ull);  // fixed internal seed; independent of caller seeds
  ComplexVector v = random_unit_vector(n, rng);
  double estimate = 0.0;
  for (int it = 0; it < 20; ++it) {
    ComplexVector w = applyAdjoint(apply(v));
    double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    estimate = std::sqrt(nrm);
    v = w / nrm;
  }
  return estimate;
}

inline double power_norm_estimate(const ComplexMatrix& A) {
  return power_norm_estimate(
      A.cols(), [&](const ComplexVector& x) { return ComplexVector(A * x); },
      [&](const ComplexVector& x) { return ComplexVector(A.adjoint() * x); });
}

/// Two classical Gram-Schmidt passes against all columns of V (full reorthogonalization).
inline void reorthogonalize(const ComplexMatrix& V, Eigen::Index cols, ComplexVector& w) {
  if (cols == 0) return;
  auto Vc = V.leftCols(cols);
  w.noalias() -= Vc * (Vc.adjoint() * w).eval();
  w.noalias() -= Vc * (Vc.adjoint() * w).eval();
}

inline void sort_svd_descending(ComplexMatrix& U, RealVector& sigma, ComplexMatrix& V) {
  const Eigen::Index n = sigma.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return sigma(a) > sigma(b); });
  ComplexMatrix Us = U, Vs = V;
  RealVector ss = sigma;
  for (Eigen::Index j = 0; j < n; ++j) {
    U.col(j) = Us.col(idx[static_cast<std::size_t>(j)]);
    V.col(j) = Vs.col(idx[static_cast<std::size_t>(j)]);
    sigma(j) = ss(idx[static_cast<std::size_t>(j)]);
  }
}

}  // namespace detail

/// Full SVD. Small problems go through Jacobi iteration (a few ulp of accuracy),
/// larger ones through divide-and-conquer.
inline SvdResult svd(const ComplexMatrix& A) {
  detail::require_finite(A, "svd");
  const Eigen::Index mn = std::min(A.rows(), A.cols());
  SvdResult out;
  if (mn <= 32) {
    Eigen::JacobiSVD<ComplexMatrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success)
      throw DecompositionError("svd: Jacobi iteration did not converge (" +
                               std::to_string(A.rows()) + "x" + std::to_string(A.cols()) + ")");
    out.left = dec.matrixU();
    out.sigma = dec.singularValues();
    out.right = dec.matrixV();
  } else {
    Eigen::BDCSVD<ComplexMatrix> dec(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success)
      throw DecompositionError("svd: divide-and-conquer iteration did not converge (" +
                               std::to_string(A.rows()) + "x" + std::to_string(A.cols()) + ")");
    out.left = dec.matrixU();
    out.sigma = dec.singularValues();
    out.right = dec.matrixV();
  }
  return out;
}

/// Singular values only (non-increasing).
inline RealVector svd_values(const ComplexMatrix& A) {
  detail::require_finite(A, "svd_values");
  if (std::min(A.rows(), A.cols()) <= 32) {
    Eigen::JacobiSVD<ComplexMatrix> dec(A);
    return dec.singularValues();
  }
  Eigen::BDCSVD<ComplexMatrix> dec(A);
  return dec.singularValues();
}

/// Exact spectral norm via singular values.
inline double spectral_norm(const ComplexMatrix& A) {
  if (A.size() == 0) return 0.0;
  return svd_values(A)(0);
}

/// Cheap deterministic spectral-norm estimate (20 power-iteration steps).
inline double spectral_norm_estimate(const ComplexMatrix& A) {
  return detail::power_norm_estimate(A);
}

namespace detail {

/// One-sided Jacobi sweeps: post-multiplies W (and accumulates into V) by
/// rotations until all column pairs are numerically orthogonal. On exit the
/// columns of W are sigma_j * u_j.
inline void jacobi_orthogonalize_columns(ComplexMatrix& W, ComplexMatrix& V, int maxSweeps,
                                         const char* op) {
  const Eigen::Index n = W.cols();
  const double tol = 1e-15;
  bool converged = false;
  for (int sweep = 0; sweep < maxSweeps && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double app = W.col(p).squaredNorm();
        const double aqq = W.col(q).squaredNorm();
        const Complex apq = W.col(p).dot(W.col(q));  // conj(w_p)^T w_q
        const double offNorm = std::abs(apq);
        if (offNorm <= tol * std::sqrt(app * aqq) || offNorm == 0.0) continue;
        converged = false;
        // Diagonalize the 2x2 Gram block [[app, apq], [conj(apq), aqq]].
        const double tau = (aqq - app) / (2.0 * offNorm);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex s = (apq / offNorm) * (c * t);
        for (ComplexMatrix* M : {&W, &V}) {
          ComplexVector colp = M->col(p);
          M->col(p) = c * colp - std::conj(s) * M->col(q);
          M->col(q) = s * colp + c * M->col(q);
        }
      }
    }
  }
  if (!converged)
    throw DecompositionError(std::string(op) + ": Jacobi sweeps did not converge after " +
                             std::to_string(maxSweeps) + " sweeps");
}

/// Extend a matrix with orthonormal columns to a square unitary of size dim.
inline ComplexMatrix complete_unitary(const ComplexMatrix& M, Eigen::Index dim) {
  if (M.cols() == dim) return M;
  if (M.cols() == 0) return ComplexMatrix::Identity(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(M);
  ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  ComplexMatrix full(dim, dim);
  full.leftCols(M.cols()) = M;
  full.rightCols(dim - M.cols()) = Q.rightCols(dim - M.cols());
  return full;
}

}  // namespace detail

/// One-sided Jacobi SVD. Computes singular values to high *relative* accuracy
/// on graded matrices, where a backward-stable SVD only guarantees absolute
/// accuracy u*sigma_max. Used by the triangular-factor structure-loss
/// measurements, where the values of interest sit near 1 while sigma_max can
/// be enormous. A column-pivoted QR runs first (columnwise backward stable, so
/// the grading that carries the small singular values survives) and the Jacobi
/// sweeps operate on the equilibrated factor R^*; accuracy then does not
/// depend on whether the input was row- or column-graded.
inline SvdResult svd_high_accuracy(const ComplexMatrix& A, int maxSweeps = 60) {
  detail::require_finite(A, "svd_high_accuracy");
  detail::require(A.rows() > 0 && A.cols() > 0, "svd_high_accuracy: empty matrix");
  if (A.rows() < A.cols()) {
    SvdResult t = svd_high_accuracy(ComplexMatrix(A.adjoint()), maxSweeps);
    return SvdResult{t.right, t.sigma, t.left};
  }
  const Eigen::Index m = A.rows(), n = A.cols();
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(A);
  const ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(m, n);
  const ComplexMatrix R =
      qr.matrixR().topRows(n).triangularView<Eigen::Upper>().toDenseMatrix();
  const ComplexMatrix P = qr.colsPermutation().toDenseMatrix().cast<Complex>();

  // R^* = Uj * Sigma * Vj^*, hence A = (Q Vj) Sigma (P Uj)^*.
  ComplexMatrix W = R.adjoint();
  ComplexMatrix Vj = ComplexMatrix::Identity(n, n);
  detail::jacobi_orthogonalize_columns(W, Vj, maxSweeps, "svd_high_accuracy");
  RealVector sigma(n);
  ComplexMatrix Uj(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sigma(j) = W.col(j).norm();
    Uj.col(j) = sigma(j) > std::numeric_limits<double>::min()
                    ? ComplexVector(W.col(j) / sigma(j))
                    : ComplexVector::Zero(n);
  }
  detail::sort_svd_descending(Uj, sigma, Vj);
  Eigen::Index rank = n;
  for (Eigen::Index j = 0; j < n; ++j)
    if (Uj.col(j).isZero(0.0)) { rank = j; break; }
  const ComplexMatrix right = detail::complete_unitary((P * Uj).leftCols(rank), n);
  const ComplexMatrix left = detail::complete_unitary(Q * Vj, m);
  return SvdResult{left, sigma, right};
}

/// Hermitian eigendecomposition, eigenvalues non-increasing. The input may carry
/// a small non-Hermitian residue (up to tolHerm * ||S||); it is symmetrized.
inline HermEigResult herm_eig(const ComplexMatrix& S, double tolHerm = 1e-8) {
  detail::require_square(S, "herm_eig");
  detail::require_finite(S, "herm_eig");
  const double normS = spectral_norm_estimate(S);
  const double normSkew = spectral_norm_estimate(ComplexMatrix(S - S.adjoint()));
  if (normSkew > tolHerm * std::max(normS, 1e-300))
    throw PreconditionError("herm_eig: matrix is not Hermitian within tolerance (skew residue " +
                            std::to_string(normSkew) + ")");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> dec(((S + S.adjoint()) * 0.5).eval());
  if (dec.info() != Eigen::Success)
    throw DecompositionError("herm_eig: iteration did not converge (n=" +
                             std::to_string(S.rows()) + ")");
  const Eigen::Index n = S.rows();
  HermEigResult out;
  out.lambda = dec.eigenvalues().reverse();
  out.basis = dec.eigenvectors().rowwise().reverse();
  (void)n;
  return out;
}

/// Lanczos tridiagonalization with full reorthogonalization. Stops when the
/// trailing coupling falls below eps * ||S||; a premature breakdown (the basis
/// does not yet reproduce S) is patched by restarting with a random vector
/// projected orthogonal to the current basis, up to maxRestarts times.
inline LanczosResult lanczos(const ComplexMatrix& S, const KrylovOptions& opts = {}) {
  detail::require_square(S, "lanczos");
  detail::require_finite(S, "lanczos");
  detail::require(opts.eps > 0, "lanczos: eps must be positive");
  const Eigen::Index n = S.rows();
  const Eigen::Index maxSteps = opts.maxSteps < 0 ? n : std::min<Eigen::Index>(opts.maxSteps, n);
  detail::require(maxSteps >= 1, "lanczos: maxSteps must allow at least one step");

  LanczosResult out;
  const double normS = spectral_norm_estimate(S);
  if (normS == 0.0) {  // zero operator: a single exhausted step
    out.basis = ComplexMatrix(n, 1);
    Rng rng(opts.seed);
    out.basis.col(0) = opts.start ? ComplexVector(opts.start->normalized())
                                  : random_unit_vector(n, rng);
    out.alpha = RealVector::Zero(1);
    out.beta = RealVector(0);
    out.history.values.push_back(0.0);
    out.converged = true;
    return out;
  }
  const double thresh = opts.eps * normS;

  Rng rng(opts.seed);
  ComplexMatrix V(n, maxSteps);
  std::vector<double> alphas, betasInT;
  if (opts.start) {
    detail::require(opts.start->size() == n, "lanczos: start vector has wrong dimension");
    detail::require(opts.start->norm() > 0, "lanczos: start vector is zero");
    V.col(0) = opts.start->normalized();
  } else {
    V.col(0) = random_unit_vector(n, rng);
  }

  auto residual_ok = [&](Eigen::Index m) {
    // Estimate || V T V^* - S ||_2 with the current m-column basis.
    ComplexMatrix T = ComplexMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) T(i, i) = alphas[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i)
      T(i + 1, i) = T(i, i + 1) = betasInT[static_cast<std::size_t>(i)];
    auto Vc = V.leftCols(m);
    auto apply = [&](const ComplexVector& x) {
      return ComplexVector(Vc * (T * (Vc.adjoint() * x)) - S * x);
    };
    auto applyAdj = [&](const ComplexVector& x) {
      return ComplexVector(Vc * (T.adjoint() * (Vc.adjoint() * x)) - S.adjoint() * x);
    };
    return detail::power_norm_estimate(n, apply, applyAdj) <= std::max(thresh, 1e-300);
  };

  double betaPrev = 0.0;
  bool converged = false;
  Eigen::Index m = 1;
  while (true) {
    const Eigen::Index i = m - 1;  // current column index
    ComplexVector w = S * V.col(i);
    if (i > 0) w.noalias() -= betaPrev * V.col(i - 1);
    const double a = std::real(Complex(V.col(i).dot(w)));
    w.noalias() -= a * V.col(i);
    alphas.push_back(a);
    detail::reorthogonalize(V, m, w);
    const double b = w.norm();
    out.history.values.push_back(b);

    if (b >= thresh) {
      if (m == maxSteps) {  // step cap hit with a live coupling
        converged = residual_ok(m);
        break;
      }
      V.col(m) = w / b;
      betasInT.push_back(b);
      betaPrev = b;
      ++m;
      continue;
    }
    // Breakdown: either the basis reproduces S, or the start vector missed an
    // invariant subspace and a restart is needed.
    if (residual_ok(m)) {
      converged = true;
      break;
    }
    if (m == maxSteps || out.restarts == opts.maxRestarts) {
      converged = false;
      break;
    }
    ComplexVector r = random_unit_vector(n, rng);
    detail::reorthogonalize(V, m, r);
    const double rn = r.norm();
    if (rn < 1e-8) {  // basis numerically complete
      converged = residual_ok(m);
      break;
    }
    V.col(m) = r / rn;
    betasInT.push_back(b);
    betaPrev = b;
    ++m;
    ++out.restarts;
  }

  out.basis = V.leftCols(m);
  out.alpha = Eigen::Map<const RealVector>(alphas.data(), static_cast<Eigen::Index>(alphas.size()));
  out.beta =
      Eigen::Map<const RealVector>(betasInT.data(), static_cast<Eigen::Index>(betasInT.size()));
  out.converged = converged;
  return out;
}

/// Golub-Kahan bidiagonalization with full reorthogonalization of both bases.
/// Stops when the running superdiagonal coupling falls below eps * ||A||; a
/// breakdown is accepted only if the operator acts as an isometry on the
/// unexplored subspace, otherwise the right basis is restarted with a random
/// orthogonal vector.
inline BidiagResult golub_kahan(const ComplexMatrix& A, const KrylovOptions& opts = {}) {
  detail::require_square(A, "golub_kahan");
  detail::require_finite(A, "golub_kahan");
  detail::require(opts.eps > 0, "golub_kahan: eps must be positive");
  const Eigen::Index n = A.rows();
  const Eigen::Index maxSteps = opts.maxSteps < 0 ? n : std::min<Eigen::Index>(opts.maxSteps, n);
  detail::require(maxSteps >= 1, "golub_kahan: maxSteps must allow at least one step");

  BidiagResult out;
  const double normA = spectral_norm_estimate(A);
  const double thresh = opts.eps * std::max(normA, 1e-300);

  Rng rng(opts.seed);
  ComplexMatrix V(n, maxSteps), U(n, maxSteps);
  std::vector<double> alphas, betasInM;
  if (opts.start) {
    detail::require(opts.start->size() == n, "golub_kahan: start vector has wrong dimension");
    detail::require(opts.start->norm() > 0, "golub_kahan: start vector is zero");
    V.col(0) = opts.start->normalized();
  } else {
    V.col(0) = random_unit_vector(n, rng);
  }

  // Left-basis column from p = A v - beta * u_prev; if the projection leaves
  // nothing (operator maps v into the explored left space), any fresh unit
  // vector orthogonal to U is a consistent continuation since alpha ~ 0.
  auto place_left = [&](Eigen::Index i, ComplexVector p) -> double {
    detail::reorthogonalize(U, i, p);
    double a = p.norm();
    if (a >= thresh) {
      U.col(i) = p / a;
    } else {
      ComplexVector f = random_unit_vector(n, rng);
      detail::reorthogonalize(U, i, f);
      U.col(i) = f.norm() > 1e-8 ? ComplexVector(f / f.norm()) : ComplexVector(p.setZero());
    }
    return a;
  };

  auto deflated_isometry_ok = [&](Eigen::Index m) {
    // Estimate || (P_U' A P_V')^* (P_U' A P_V') - P_V' ||_2 where P' projects on
    // the orthogonal complements of the explored bases. Scale: sigma^2 - 1.
    auto Uc = U.leftCols(m);
    auto Vc = V.leftCols(m);
    auto apply = [&](const ComplexVector& x) {
      ComplexVector t = x - Vc * (Vc.adjoint() * x).eval();
      ComplexVector s = A * t;
      s.noalias() -= Uc * (Uc.adjoint() * s).eval();
      ComplexVector r = A.adjoint() * s;
      r.noalias() -= Vc * (Vc.adjoint() * r).eval();
      return ComplexVector(r - t);
    };
    const double bound = 10.0 * opts.eps * std::max(1.0, normA) * std::max(1.0, normA);
    return detail::power_norm_estimate(n, apply, apply) <= bound;
  };

  alphas.push_back(place_left(0, ComplexVector(A * V.col(0))));
  bool converged = false;
  Eigen::Index m = 1;
  while (true) {
    const Eigen::Index i = m - 1;
    ComplexVector r = A.adjoint() * U.col(i);
    r.noalias() -= alphas[static_cast<std::size_t>(i)] * V.col(i);
    detail::reorthogonalize(V, m, r);
    const double b = r.norm();
    out.history.values.push_back(b);

    if (b < thresh) {
      if (deflated_isometry_ok(m)) {
        converged = true;
        break;
      }
      if (m == maxSteps || out.restarts == opts.maxRestarts) {
        converged = false;
        break;
      }
      ComplexVector f = random_unit_vector(n, rng);
      detail::reorthogonalize(V, m, f);
      const double fn = f.norm();
      if (fn < 1e-8) {
        converged = deflated_isometry_ok(m);
        break;
      }
      V.col(m) = f / fn;
      ++out.restarts;
    } else {
      if (m == maxSteps) {
        converged = false;
        break;
      }
      V.col(m) = r / b;
    }
    betasInM.push_back(b);
    ComplexVector p = A * V.col(m);
    p.noalias() -= b * U.col(i);
    alphas.push_back(place_left(m, std::move(p)));
    ++m;
  }

  out.leftBasis = U.leftCols(m);
  out.rightBasis = V.leftCols(m);
  out.alpha = Eigen::Map<const RealVector>(alphas.data(), static_cast<Eigen::Index>(alphas.size()));
  out.beta =
      Eigen::Map<const RealVector>(betasInM.data(), static_cast<Eigen::Index>(betasInM.size()));
  out.converged = converged;
  return out;
}

}  // namespace uplr
