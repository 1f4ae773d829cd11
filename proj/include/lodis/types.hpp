#ifndef LODIS_TYPES_HPP
#define LODIS_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lodis {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative rank tolerance: singular values above tol * sigma_max count.
inline constexpr double kDefaultTol = 1e-10;
/// Absolute bound on the worst entry of X - X^dagger.
inline constexpr double kHermTol = 1e-12;
/// Resampling budget for the random-combination diagonalizer.
inline constexpr int kDefaultRetries = 8;

inline constexpr const char* kToolName    = "lodis";
inline constexpr const char* kToolVersion = "0.1.0";

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct NormalizationError : Error { using Error::Error; };

struct OrthogonalityError : Error {
  OrthogonalityError(const std::string& msg, int a, int b, double ov)
      : Error(msg), state_a(a), state_b(b), overlap(ov) {}
  int state_a;
  int state_b;
  double overlap;
};

struct NonCommutingInput : Error { using Error::Error; };
struct DegenerateFailure : Error { using Error::Error; };
struct NonTraceless : Error { using Error::Error; };
struct RankAmbiguity : Error { using Error::Error; };

struct OPViolation : Error {
  OPViolation(const std::string& msg, int outcome_, int i_, int i2_, int j_, int j2_,
              double value_)
      : Error(msg), outcome(outcome_), i(i_), i2(i2_), j(j_), j2(j2_), value(value_) {}
  int outcome, i, i2, j, j2;
  double value;
};

struct ConventionError : Error { using Error::Error; };
struct InternalConsistencyError : Error { using Error::Error; };

inline bool is_hermitian(const Matrix& m, double tol = kHermTol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace lodis

#endif
