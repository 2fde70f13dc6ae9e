#include "kreinframes/frames.hpp"

#include <algorithm>
#include <cmath>

namespace kf {

int Frame::sign_of(int user_index) const {
  return self_products_(user_index) >= 0.0 ? +1 : -1;
}

Frame build_frame(const KreinSpace& space, const Mat& vectors) {
  if (vectors.cols() == 0) throw Error(ErrorCode::EmptyFamily, "frame has no vectors");
  if (vectors.rows() != space.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "frame vectors have length " + std::to_string(vectors.rows()) + ", expected " +
                    std::to_string(space.dim()));
  const int N = static_cast<int>(vectors.cols());
  RVec self(N);
  std::vector<int> plus, minus;
  for (int i = 0; i < N; ++i) {
    if (vectors.col(i).cwiseAbs().maxCoeff() == 0.0)
      throw Error(ErrorCode::ZeroVector, "frame vector " + std::to_string(i + 1) + " is zero");
    // exact sign of the computed value; neutral vectors belong to I_+
    self(i) = space.inner(vectors.col(i), vectors.col(i)).real();
    (self(i) >= 0.0 ? plus : minus).push_back(i);
  }

  Frame F(space, KreinSpace(static_cast<int>(plus.size()), static_cast<int>(minus.size())));
  F.vectors_ = vectors;
  F.self_products_ = self;
  F.plus_ = plus;
  F.minus_ = minus;
  F.permutation_ = plus;
  F.permutation_.insert(F.permutation_.end(), minus.begin(), minus.end());
  F.synthesis_.resize(space.dim(), N);
  for (int j = 0; j < N; ++j) F.synthesis_.col(j) = vectors.col(F.permutation_[j]);
  return F;
}

Frame build_frame(const KreinSpace& space, const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::EmptyFamily, "frame has no vectors");
  Mat m(space.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != space.dim())
      throw Error(ErrorCode::DimensionMismatch,
                  "frame vector " + std::to_string(i + 1) + " has length " +
                      std::to_string(vectors[i].size()) + ", expected " +
                      std::to_string(space.dim()));
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return build_frame(space, m);
}

std::string JFrameReport::failure_reason() const {
  std::string out;
  for (const auto& r : failure_reasons) {
    if (!out.empty()) out += "; ";
    out += r;
  }
  return out;
}

JFrameReport is_jframe(const Frame& F, const Tolerances& tol) {
  const KreinSpace& H = F.space();
  Subspace m_plus = F.n_plus() > 0 ? Subspace::span_of(H, F.synthesis_plus(), tol.rank)
                                   : Subspace::zero(H);
  Subspace m_minus = F.n_minus() > 0 ? Subspace::span_of(H, F.synthesis_minus(), tol.rank)
                                     : Subspace::zero(H);
  JFrameReport rep{false, classify_subspace(m_plus, tol), classify_subspace(m_minus, tol),
                   m_plus, m_minus, false, {}};

  Mat stacked(H.dim(), m_plus.dim() + m_minus.dim());
  stacked << m_plus.basis(), m_minus.basis();
  rep.direct_sum_ok = stacked.cols() == H.dim() && linalg::rank(stacked, tol.rank) == H.dim();

  if (H.p() == 0 || H.q() == 0) rep.failure_reasons.emplace_back(kReasonDefiniteSpace);
  if (!rep.class_plus.maximal_uniformly_positive())
    rep.failure_reasons.emplace_back(kReasonPlusNotMaximal);
  if (!rep.class_minus.maximal_uniformly_negative())
    rep.failure_reasons.emplace_back(kReasonMinusNotMaximal);
  if (rep.failure_reasons.empty() && !rep.direct_sum_ok)
    rep.failure_reasons.emplace_back(kReasonNotDirectSum);
  rep.is_jframe = rep.failure_reasons.empty();
  return rep;
}

namespace {

// Generalized extreme eigenvalues of (frame form, indefinite form) restricted
// to the span of `family`; nullopt when the indefinite form is not definite
// with the requested sign.
std::optional<BoundPair> restricted_bounds(const KreinSpace& H, const Mat& family, int side,
                                           const Tolerances& tol) {
  if (family.cols() == 0) return std::nullopt;
  const Mat onb = linalg::column_space(family, tol.rank);
  const Mat& J = H.J();
  const Mat form = static_cast<double>(side) * linalg::hermitian_part(onb.adjoint() * J * onb);
  const RVec form_ev = linalg::hermitian_eigenvalues(form);
  if (std::abs(form_ev(0)) <= tol.pd) return std::nullopt;  // degenerate
  if (form_ev(0) < 0.0) return std::nullopt;                // indefinite or wrong sign
  // sum_i |[f, f_i]|^2 for f = onb c is c^H (onb^H J F F^H J onb) c
  const Mat w = family.adjoint() * J * onb;
  const Mat frame_form = w.adjoint() * w;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(linalg::hermitian_part(frame_form), form);
  if (ges.info() != Eigen::Success) return std::nullopt;
  const RVec& ev = ges.eigenvalues();
  if (ev(0) <= 0.0) return std::nullopt;
  return BoundPair{ev(0), ev(ev.size() - 1)};
}

}  // namespace

bool jframe_by_frame_inequalities(const Frame& F, const Tolerances& tol) {
  const KreinSpace& H = F.space();
  if (H.p() == 0 || H.q() == 0) return false;
  if (linalg::rank(F.synthesis(), tol.rank) < H.dim()) return false;  // not a frame for H
  const auto plus = restricted_bounds(H, F.synthesis_plus(), +1, tol);
  const auto minus = restricted_bounds(H, F.synthesis_minus(), -1, tol);
  return plus.has_value() && minus.has_value();
}

HilbertBounds hilbert_frame_bounds(const Mat& vectors, int n, const Tolerances& tol) {
  if (vectors.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "vectors do not have length n");
  HilbertBounds out;
  if (vectors.cols() == 0) return out;
  const RVec ev = linalg::hermitian_eigenvalues(vectors * vectors.adjoint());
  out.beta = ev(ev.size() - 1);
  out.spanning = ev(0) > tol.rank * out.beta;
  out.alpha = out.spanning ? ev(0) : 0.0;
  return out;
}

BoundPair frame_bounds_on_definite_subspace(const Frame& F, int side, const Tolerances& tol) {
  if (side != 1 && side != -1) throw Error(ErrorCode::InvalidArgument, "side must be +1 or -1");
  const JFrameReport rep = is_jframe(F, tol);
  if (!rep.is_jframe) throw Error(ErrorCode::NotJFrame, rep.failure_reason());
  const Subspace& M = side > 0 ? rep.m_plus : rep.m_minus;
  const Mat family = side > 0 ? F.synthesis_plus() : F.synthesis_minus();
  // V^H J V = side * I, so +-[f, f] = |c|^2 for f = V c
  const Mat V = orthonormalize_definite(M, side);
  const Mat w = family.adjoint() * F.space().J() * V;
  const RVec ev = linalg::hermitian_eigenvalues(w.adjoint() * w);
  return BoundPair{ev(0), ev(ev.size() - 1)};
}

}  // namespace kf
