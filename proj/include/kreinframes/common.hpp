#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace kf {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  RankDeficient,
  EmptyFamily,
  ZeroVector,
  NotDefinite,
  NotMaximalDefinite,
  NotGraph,
  ContractViolation,
  NotComplementary,
  NotJFrame,
  RepresentationInconsistent,
  OracleMismatch,
  InvariantViolation,
  SingularS,
  LambdaInSpectrum,
  EigenSolverFailure,
  SpectrumNotInRHP,
  RecurrenceBreakdown,
  InvalidContour,
  ContourTooClose,
  CannotEnclose,
  NonRegularKernel,
  OperatorMismatch,
  GenerationExhausted,
  Parse,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical thresholds shared by every module. Relative quantities are
/// measured against the Hilbert norm induced by the fundamental symmetry.
struct Tolerances {
  double rank = 1e-10;            // relative singular-value cutoff
  double pd = 1e-10;              // definiteness margin
  double contract = 1e-10;        // angular operators must satisfy ||K|| < 1 - contract
  double subspace_angle = 1e-8;   // sin of the largest principal angle
  double real = 1e-9;             // |Im z| <= real * (1 + |z|) counts as real
  double enclosure = 1e-9;        // boundary slack for region membership
};

namespace linalg {

/// Spectral norm (largest singular value). Zero for empty matrices.
double norm2(const Mat& m);

/// Hermitian part (M + M^H) / 2.
Mat hermitian_part(const Mat& m);

/// Ascending eigenvalues of the Hermitian part of `m`.
RVec hermitian_eigenvalues(const Mat& m);

/// Hilbert-orthonormal basis of the column space, rank cut at `rel_tol`.
Mat column_space(const Mat& m, double rel_tol);

/// Hilbert-orthonormal basis of the null space {x : m x = 0}.
Mat null_space(const Mat& m, double rel_tol);

/// Numerical rank with relative singular-value cutoff.
Eigen::Index rank(const Mat& m, double rel_tol);

/// Sine of the largest principal angle between two column spaces; 1 when the
/// dimensions differ.
double subspace_gap(const Mat& a, const Mat& b, double rel_tol = 1e-10);

/// Rotates each column so that its first largest-modulus entry is real and
/// positive. Used to pin bases that are otherwise defined up to phases.
void normalize_column_phases(Mat& m);

/// Relative difference ||a - b|| / max(||ref||, tiny).
double rel_diff(const Mat& a, const Mat& b, double ref_norm);

}  // namespace linalg
}  // namespace kf
