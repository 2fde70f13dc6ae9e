#include "kreinframes/krein.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kf {

namespace {

Mat canonical_symmetry(int p, int q) {
  Mat J = Mat::Zero(p + q, p + q);
  for (int i = 0; i < p + q; ++i) J(i, i) = (i < p) ? 1.0 : -1.0;
  return J;
}

void check_vector(const Vec& x, const KreinSpace& space, const char* what) {
  if (x.size() != space.dim())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has length " + std::to_string(x.size()) +
                    ", expected " + std::to_string(space.dim()));
}

}  // namespace

KreinSpace::KreinSpace(int p, int q) : p_(p), q_(q), canonical_(true) {
  if (p < 0 || q < 0 || p + q == 0)
    throw Error(ErrorCode::InvalidArgument, "signature (p, q) must be non-negative with p + q > 0");
  J_ = std::make_shared<const Mat>(canonical_symmetry(p, q));
  W_ = std::make_shared<const Mat>(Mat::Identity(p + q, p + q));
}

KreinSpace::KreinSpace(int p, int q, std::shared_ptr<const Mat> J, std::shared_ptr<const Mat> W,
                       bool canonical)
    : p_(p), q_(q), J_(std::move(J)), W_(std::move(W)), canonical_(canonical) {}

KreinSpace KreinSpace::from_symmetry(const Mat& J, double tol) {
  if (J.rows() != J.cols() || J.rows() == 0)
    throw Error(ErrorCode::InvalidArgument, "fundamental symmetry must be a non-empty square matrix");
  const auto n = J.rows();
  if ((J - J.adjoint()).norm() > tol * std::sqrt(static_cast<double>(n)))
    throw Error(ErrorCode::InvalidArgument, "fundamental symmetry is not Hermitian");
  if ((J * J - Mat::Identity(n, n)).norm() > tol * std::sqrt(static_cast<double>(n)))
    throw Error(ErrorCode::InvalidArgument, "fundamental symmetry is not an involution");

  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::hermitian_part(J));
  // eigenvalues ascend: the -1 block comes first
  const RVec& ev = es.eigenvalues();
  int q = 0;
  while (q < n && ev(q) < 0.0) ++q;
  const int p = static_cast<int>(n) - q;
  Mat W(n, n);
  W.leftCols(p) = es.eigenvectors().rightCols(p);
  W.rightCols(q) = es.eigenvectors().leftCols(q);
  const bool canonical = (J - canonical_symmetry(p, q)).norm() == 0.0;
  if (canonical) W = Mat::Identity(n, n);
  return KreinSpace(p, q, std::make_shared<const Mat>(canonical ? canonical_symmetry(p, q) : J),
                    std::make_shared<const Mat>(W), canonical);
}

cplx KreinSpace::inner(const Vec& x, const Vec& y) const {
  return y.adjoint() * (J() * x);
}

bool KreinSpace::operator==(const KreinSpace& other) const {
  if (J_ == other.J_) return true;
  return p_ == other.p_ && q_ == other.q_ && J() == other.J();
}

cplx indefinite_inner(const Vec& x, const Vec& y, const KreinSpace& space) {
  check_vector(x, space, "x");
  check_vector(y, space, "y");
  return space.inner(x, y);
}

Mat krein_adjoint(const Mat& T, const KreinSpace& source, const KreinSpace& target) {
  if (T.cols() != source.dim() || T.rows() != target.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "operator is " + std::to_string(T.rows()) + "x" + std::to_string(T.cols()) +
                    " but maps a " + std::to_string(source.dim()) + "-space into a " +
                    std::to_string(target.dim()) + "-space");
  if (source.is_canonical() && target.is_canonical()) {
    // diagonal symmetries: scale rows and columns instead of multiplying
    Mat out = T.adjoint();
    for (int i = 0; i < source.dim(); ++i)
      if (i >= source.p()) out.row(i) *= -1.0;
    for (int j = 0; j < target.dim(); ++j)
      if (j >= target.p()) out.col(j) *= -1.0;
    return out;
  }
  return source.J() * T.adjoint() * target.J();
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(KreinSpace ambient, Mat basis, double rank_tol)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_.dim())
    throw Error(ErrorCode::DimensionMismatch, "subspace basis has wrong row count");
  if (basis_.cols() > ambient_.dim())
    throw Error(ErrorCode::RankDeficient, "more basis vectors than the ambient dimension");
  if (basis_.cols() > 0 && linalg::rank(basis_, rank_tol) < basis_.cols())
    throw Error(ErrorCode::RankDeficient, "subspace basis is not of full column rank");
  gram_ = basis_.adjoint() * ambient_.J() * basis_;
}

Subspace Subspace::span_of(const KreinSpace& ambient, const Mat& vectors, double rank_tol) {
  if (vectors.rows() != ambient.dim())
    throw Error(ErrorCode::DimensionMismatch, "spanning set has wrong row count");
  return Subspace(ambient, linalg::column_space(vectors, rank_tol), rank_tol);
}

Subspace Subspace::zero(const KreinSpace& ambient) {
  return Subspace(ambient, Mat(ambient.dim(), 0));
}

std::string to_string(SubspaceTag tag) {
  switch (tag) {
    case SubspaceTag::UniformlyPositive: return "UniformlyPositive";
    case SubspaceTag::UniformlyNegative: return "UniformlyNegative";
    case SubspaceTag::NonNegative: return "NonNegative";
    case SubspaceTag::NonPositive: return "NonPositive";
    case SubspaceTag::Neutral: return "Neutral";
    case SubspaceTag::Indefinite: return "Indefinite";
    case SubspaceTag::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

SubspaceClass classify_subspace(const Subspace& M, const Tolerances& tol) {
  SubspaceClass cls;
  if (M.is_zero()) {
    cls.tag = SubspaceTag::Neutral;
    return cls;
  }
  const Mat onb = linalg::column_space(M.basis(), tol.rank);
  const Mat g = onb.adjoint() * M.ambient().J() * onb;
  const RVec ev = linalg::hermitian_eigenvalues(g);
  cls.min_eig = ev(0);
  cls.max_eig = ev(ev.size() - 1);
  const double eps = tol.pd;
  const bool any_pos = cls.max_eig > eps;
  const bool any_neg = cls.min_eig < -eps;
  bool any_zero = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= eps) any_zero = true;
  cls.degenerate = any_zero;

  if (!any_pos && !any_neg)
    cls.tag = SubspaceTag::Neutral;
  else if (any_pos && any_neg)
    cls.tag = any_zero ? SubspaceTag::Degenerate : SubspaceTag::Indefinite;
  else if (any_pos)
    cls.tag = any_zero ? SubspaceTag::NonNegative : SubspaceTag::UniformlyPositive;
  else
    cls.tag = any_zero ? SubspaceTag::NonPositive : SubspaceTag::UniformlyNegative;

  if (cls.tag == SubspaceTag::UniformlyPositive) cls.maximal = M.dim() == M.ambient().p();
  if (cls.tag == SubspaceTag::UniformlyNegative) cls.maximal = M.dim() == M.ambient().q();
  return cls;
}

Subspace orthogonal_companion(const Subspace& M, const Tolerances& tol) {
  const KreinSpace& H = M.ambient();
  if (M.is_zero()) return Subspace(H, Mat::Identity(H.dim(), H.dim()));
  // x in M^[perp]  <=>  basis^H J x = 0
  const Mat rows = M.basis().adjoint() * H.J();
  Mat ns = linalg::null_space(rows, tol.rank);
  linalg::normalize_column_phases(ns);
  return Subspace(H, ns, tol.rank);
}

Mat orthonormalize_definite(const Subspace& M, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  if (M.is_zero()) return M.basis();
  const Mat g = static_cast<double>(sign) * linalg::hermitian_part(M.gram());
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotDefinite,
                std::string("gram matrix is not ") + (sign > 0 ? "positive" : "negative") +
                    " definite");
  // B L^{-H}: gram becomes L^{-1} (sign * G) L^{-H} = I
  Mat out = llt.matrixU().solve<Eigen::OnTheRight>(M.basis());
  linalg::normalize_column_phases(out);
  return out;
}

// ------------------------------------------------- FundamentalDecomposition

Mat FundamentalDecomposition::basis() const {
  Mat b(onb_plus.rows(), onb_plus.cols() + onb_minus.cols());
  b << onb_plus, onb_minus;
  return b;
}

Mat FundamentalDecomposition::coordinates() const {
  // [b_i, b_j] = J0 => basis^{-1} = J0 basis^H J
  Mat c = basis().adjoint() * plus.ambient().J();
  c.bottomRows(q()) *= -1.0;
  return c;
}

Mat FundamentalDecomposition::to_blocks(const Mat& S) const {
  return coordinates() * S * basis();
}

Mat FundamentalDecomposition::from_blocks(const Mat& blocks) const {
  return basis() * blocks * coordinates();
}

namespace {

FundamentalDecomposition assemble(Subspace plus, Subspace minus) {
  const KreinSpace& H = plus.ambient();
  Mat onb_plus = orthonormalize_definite(plus, +1);
  Mat onb_minus = orthonormalize_definite(minus, -1);
  const Mat J = H.J();
  const Mat induced = onb_plus * onb_plus.adjoint() * J + onb_minus * onb_minus.adjoint() * J;
  return FundamentalDecomposition{std::move(plus), std::move(minus), std::move(onb_plus),
                                  std::move(onb_minus), induced};
}

}  // namespace

FundamentalDecomposition fundamental_decomposition_from(const Subspace& M_minus,
                                                        const Tolerances& tol) {
  if (!classify_subspace(M_minus, tol).maximal_uniformly_negative())
    throw Error(ErrorCode::NotMaximalDefinite, "subspace is not maximal uniformly negative");
  Subspace plus = orthogonal_companion(M_minus, tol);
  if (!classify_subspace(plus, tol).maximal_uniformly_positive())
    throw Error(ErrorCode::NotMaximalDefinite,
                "orthogonal companion is not maximal uniformly positive");
  return assemble(std::move(plus), M_minus);
}

FundamentalDecomposition fundamental_decomposition_from_plus(const Subspace& M_plus,
                                                             const Tolerances& tol) {
  if (!classify_subspace(M_plus, tol).maximal_uniformly_positive())
    throw Error(ErrorCode::NotMaximalDefinite, "subspace is not maximal uniformly positive");
  Subspace minus = orthogonal_companion(M_plus, tol);
  if (!classify_subspace(minus, tol).maximal_uniformly_negative())
    throw Error(ErrorCode::NotMaximalDefinite,
                "orthogonal companion is not maximal uniformly negative");
  return assemble(M_plus, std::move(minus));
}

// ---------------------------------------------------------- AngularOperator

Mat AngularOperator::graph_basis() const {
  if (sign < 0) return source_decomp.onb_plus * matrix + source_decomp.onb_minus;
  return source_decomp.onb_plus + source_decomp.onb_minus * matrix;
}

AngularOperator angular_operator(const Subspace& L, const FundamentalDecomposition& decomp,
                                 const Tolerances& tol) {
  const SubspaceClass cls = classify_subspace(L, tol);
  int sign = 0;
  if (cls.maximal_uniformly_positive()) sign = +1;
  if (cls.maximal_uniformly_negative()) sign = -1;
  if (sign == 0)
    throw Error(ErrorCode::NotMaximalDefinite, "angular operators need a maximal uniformly definite subspace");

  const Mat c = decomp.coordinates() * L.basis();
  const Mat c_plus = c.topRows(decomp.p());
  const Mat c_minus = c.bottomRows(decomp.q());
  const Mat& dominant = sign < 0 ? c_minus : c_plus;
  const Mat& other = sign < 0 ? c_plus : c_minus;

  Eigen::FullPivLU<Mat> lu(dominant);
  lu.setThreshold(tol.rank);
  if (!lu.isInvertible())
    throw Error(ErrorCode::NotGraph, "subspace is not a graph over the decomposition half");

  AngularOperator out{other * lu.inverse(), 0.0, sign, decomp};
  out.norm = linalg::norm2(out.matrix);
  if (out.norm >= 1.0 - tol.contract)
    throw Error(ErrorCode::ContractViolation,
                "angular operator has norm " + std::to_string(out.norm) + " >= 1");
  return out;
}

Mat oblique_projection(const Subspace& range, const Subspace& kernel, const Tolerances& tol) {
  const int n = range.ambient().dim();
  if (kernel.ambient().dim() != n)
    throw Error(ErrorCode::DimensionMismatch, "range and kernel live in different spaces");
  if (range.dim() + kernel.dim() != n)
    throw Error(ErrorCode::NotComplementary, "dimensions of range and kernel do not add up");
  Mat stacked(n, n);
  stacked << range.basis(), kernel.basis();
  if (linalg::rank(stacked, tol.rank) < n)
    throw Error(ErrorCode::NotComplementary, "range and kernel intersect");
  Mat selector = Mat::Zero(n, n);
  selector.topLeftCorner(range.dim(), range.dim()).setIdentity();
  // Q = B diag(I, 0) B^{-1}
  return stacked * selector * stacked.partialPivLu().inverse();
}

bool same_subspace(const Mat& a, const Mat& b, double angle_tol) {
  return linalg::subspace_gap(a, b) <= angle_tol;
}

}  // namespace kf
