#include "kreinframes/common.hpp"

#include <algorithm>
#include <cmath>

namespace kf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotDefinite: return "NotDefinite";
    case ErrorCode::NotMaximalDefinite: return "NotMaximalDefinite";
    case ErrorCode::NotGraph: return "NotGraph";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::NotComplementary: return "NotComplementary";
    case ErrorCode::NotJFrame: return "NotJFrame";
    case ErrorCode::RepresentationInconsistent: return "RepresentationInconsistent";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::SingularS: return "SingularS";
    case ErrorCode::LambdaInSpectrum: return "LambdaInSpectrum";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::SpectrumNotInRHP: return "SpectrumNotInRHP";
    case ErrorCode::RecurrenceBreakdown: return "RecurrenceBreakdown";
    case ErrorCode::InvalidContour: return "InvalidContour";
    case ErrorCode::ContourTooClose: return "ContourTooClose";
    case ErrorCode::CannotEnclose: return "CannotEnclose";
    case ErrorCode::NonRegularKernel: return "NonRegularKernel";
    case ErrorCode::OperatorMismatch: return "OperatorMismatch";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace linalg {

double norm2(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat hermitian_part(const Mat& m) { return (m + m.adjoint()) / 2.0; }

RVec hermitian_eigenvalues(const Mat& m) {
  if (m.size() == 0) return RVec();
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::EigenSolverFailure, "Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

namespace {

Eigen::Index cutoff_rank(const RVec& sv, double rel_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rel_tol * sv(0)) ++r;
  return r;
}

}  // namespace

Eigen::Index rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  return cutoff_rank(svd.singularValues(), rel_tol);
}

Mat column_space(const Mat& m, double rel_tol) {
  if (m.size() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  const auto r = cutoff_rank(svd.singularValues(), rel_tol);
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& m, double rel_tol) {
  const auto cols = m.cols();
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto r = cutoff_rank(svd.singularValues(), rel_tol);
  return svd.matrixV().rightCols(cols - r);
}

double subspace_gap(const Mat& a, const Mat& b, double rel_tol) {
  const Mat qa = column_space(a, rel_tol);
  const Mat qb = column_space(b, rel_tol);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  const Mat residual = qb - qa * (qa.adjoint() * qb);
  return std::min(1.0, norm2(residual));
}

void normalize_column_phases(Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      // first entry within rounding of the maximum wins, so ties are stable
      const double a = std::abs(m(i, j));
      if (a > best * (1.0 + 1e-12)) {
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const cplx phase = std::conj(m(imax, j)) / best;
    m.col(j) *= phase;
    m(imax, j) = cplx(m(imax, j).real(), 0.0);
  }
}

double rel_diff(const Mat& a, const Mat& b, double ref_norm) {
  const double d = norm2(a - b);
  return d / std::max(ref_norm, 1e-300);
}

}  // namespace linalg
}  // namespace kf
