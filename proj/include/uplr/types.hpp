#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uplr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Dead-band half-width around the pivot singular value 1 (absolute).
inline constexpr double kDefaultTau = 1e-10;
/// Dead-band half-width around eigenvalue 0 of the skew part, relative to its spectral norm.
inline constexpr double kDefaultTauH = 1e-10;
/// Default Krylov breakdown / truncation threshold (relative).
inline constexpr double kDefaultEps = 1e-14;
/// Default seed for every randomized routine; override per call or via UPLR_SEED in the CLI.
inline constexpr unsigned long long kDefaultSeed = 42;

/// Base error: every failure carries a short machine-parsable code plus a human message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

/// Violated input contract: wrong shape, non-finite entries, bad parameter.
class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& message) : Error("E_PRECONDITION", message) {}
};

/// A dense factorization failed to converge.
class DecompositionError : public Error {
public:
  explicit DecompositionError(const std::string& message) : Error("E_DECOMPOSITION", message) {}
};

/// Matrix inversion requested at (numerical) singularity.
class SingularityError : public Error {
public:
  explicit SingularityError(const std::string& message) : Error("E_SINGULAR", message) {}
};

/// Exact integer coefficient left the exactly-representable double range.
class OverflowError : public Error {
public:
  explicit OverflowError(const std::string& message) : Error("E_OVERFLOW", message) {}
};

/// File I/O or format failure; message carries the offending line number when known.
class IoError : public Error {
public:
  explicit IoError(const std::string& message) : Error("E_IO", message) {}
};

/// Magnitudes of the trailing Krylov couplings, one entry per iteration (1-based steps).
struct ConvergenceHistory {
  std::vector<double> values;

  int steps() const noexcept { return static_cast<int>(values.size()); }
  double at_step(int step) const { return values.at(static_cast<std::size_t>(step) - 1); }
};

/// Krylov iteration that ran out of steps or restarts; carries the partial history.
class RecoveryError : public Error {
public:
  RecoveryError(const std::string& message, ConvergenceHistory history)
      : Error("E_NOCONV", message), history_(std::move(history)) {}
  const ConvergenceHistory& history() const noexcept { return history_; }

private:
  ConvergenceHistory history_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

inline void require_square(const ComplexMatrix& A, const char* op) {
  require(A.rows() == A.cols(),
          std::string(op) + ": matrix must be square, got " + std::to_string(A.rows()) + "x" +
              std::to_string(A.cols()));
}

inline void require_finite(const ComplexMatrix& A, const char* op) {
  if (!A.allFinite())
    throw PreconditionError(std::string(op) + ": matrix contains non-finite entries");
}

}  // namespace detail

}  // namespace uplr
