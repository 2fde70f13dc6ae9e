#include "kreinframes/jframe.hpp"

#include <algorithm>
#include <cmath>

namespace kf {

namespace {

void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

Mat inverse_of(const Mat& m) { return m.partialPivLu().inverse(); }

double min_eig(const Mat& m) { return linalg::hermitian_eigenvalues(m)(0); }

Mat embed(const Mat& tl, const Mat& tr, const Mat& bl, const Mat& br) {
  Mat out(tl.rows() + bl.rows(), tl.cols() + tr.cols());
  out << tl, tr, bl, br;
  return out;
}

double rel_to_block(const Mat& got, const Mat& want) {
  return linalg::norm2(got - want) / std::max(1.0, linalg::norm2(want));
}

}  // namespace

JFrameOperatorBundle jframe_operator(const Frame& F, const Tolerances& tol) {
  const JFrameReport rep = is_jframe(F, tol);
  if (!rep.is_jframe) throw Error(ErrorCode::NotJFrame, rep.failure_reason());
  const KreinSpace& H = F.space();
  const Mat& J = H.J();
  const Mat& T = F.synthesis();
  const Mat Tp = F.synthesis_plus();
  const Mat Tm = F.synthesis_minus();

  JFrameOperatorBundle b{T * krein_adjoint(T, F.ell2(), H),
                         Tp * Tp.adjoint() * J,
                         Tm * Tm.adjoint() * J,
                         oblique_projection(rep.m_plus, rep.m_minus, tol),
                         rep.m_plus,
                         rep.m_minus,
                         F};

  const double s_norm = linalg::norm2(b.S);
  const Mat I = Mat::Identity(H.dim(), H.dim());
  require(linalg::norm2(b.S - (b.S_plus - b.S_minus)) <= 1e-12 * s_norm,
          ErrorCode::InvariantViolation, "S != S_+ - S_-");
  require(linalg::norm2(b.Q * b.S - b.S_plus) <= 1e-12 * s_norm, ErrorCode::InvariantViolation,
          "Q S != S_+");
  require(linalg::norm2((I - b.Q) * b.S + b.S_minus) <= 1e-12 * s_norm,
          ErrorCode::InvariantViolation, "(I - Q) S != -S_-");
  const Mat JS = J * b.S;
  require(linalg::norm2(JS - JS.adjoint()) <= 1e-12 * s_norm, ErrorCode::InvariantViolation,
          "S is not Krein self-adjoint");
  // [S_+- f, f] = f^H (J S_+-) f must be non-negative for every f
  const double floor = -1e-10 * std::max(1.0, s_norm);
  require(min_eig(J * b.S_plus) >= floor, ErrorCode::InvariantViolation, "S_+ is not positive");
  require(min_eig(J * b.S_minus) >= floor, ErrorCode::InvariantViolation, "S_- is not positive");
  return b;
}

// ------------------------------------------------------------ block reps

Mat BlockRepCork::assemble() const {
  return embed(A, -A * K, K.adjoint() * A, D);
}

Mat BlockRepEdinburgh::assemble() const {
  return embed(Aprime, L * Dprime, -Dprime * L.adjoint(), Dprime);
}

BlockRepCork block_rep_cork(const JFrameOperatorBundle& bundle, const Tolerances& tol) {
  FundamentalDecomposition decomp = fundamental_decomposition_from(bundle.m_minus, tol);
  const int p = decomp.p();
  const int q = decomp.q();
  const Mat M = decomp.to_blocks(bundle.S);
  const double s_norm = linalg::norm2(bundle.S);

  BlockRepCork rep{decomp, linalg::hermitian_part(M.topLeftCorner(p, p)), Mat(), 
                   linalg::hermitian_part(M.bottomRightCorner(q, q)), Mat(), M, 0.0};
  require(min_eig(rep.A) > tol.pd * s_norm, ErrorCode::InvariantViolation,
          "A is not uniformly positive");
  rep.K = -inverse_of(rep.A) * M.topRightCorner(p, q);
  rep.DplusKAK = linalg::hermitian_part(rep.D + rep.K.adjoint() * rep.A * rep.K);

  const AngularOperator ang =
      angular_operator(orthogonal_companion(bundle.m_plus, tol), decomp, tol);
  rep.angular_mismatch = linalg::norm2(rep.K - ang.matrix);
  require(rep.angular_mismatch <= 1e-8, ErrorCode::RepresentationInconsistent,
          "K from the block entries disagrees with the angular operator of M_+^[perp] by " +
              std::to_string(rep.angular_mismatch));
  require(linalg::norm2(rep.K) < 1.0 - tol.contract, ErrorCode::InvariantViolation,
          "K is not a uniform contraction");
  require(min_eig(rep.DplusKAK) > tol.pd * s_norm, ErrorCode::InvariantViolation,
          "D + K^H A K is not uniformly positive");
  return rep;
}

BlockRepEdinburgh block_rep_edinburgh(const JFrameOperatorBundle& bundle,
                                      const Tolerances& tol) {
  FundamentalDecomposition decomp = fundamental_decomposition_from_plus(bundle.m_plus, tol);
  const int p = decomp.p();
  const int q = decomp.q();
  const Mat M = decomp.to_blocks(bundle.S);
  const double s_norm = linalg::norm2(bundle.S);

  BlockRepEdinburgh rep{decomp, linalg::hermitian_part(M.topLeftCorner(p, p)), Mat(),
                        linalg::hermitian_part(M.bottomRightCorner(q, q)), Mat(), M, 0.0};
  require(min_eig(rep.Dprime) > tol.pd * s_norm, ErrorCode::InvariantViolation,
          "D' is not uniformly positive");
  rep.L = M.topRightCorner(p, q) * inverse_of(rep.Dprime);
  rep.AplusLDL = linalg::hermitian_part(rep.Aprime + rep.L * rep.Dprime * rep.L.adjoint());

  const AngularOperator ang = angular_operator(bundle.m_minus, decomp, tol);
  rep.angular_mismatch = linalg::norm2(rep.L - ang.matrix);
  require(rep.angular_mismatch <= 1e-8, ErrorCode::RepresentationInconsistent,
          "L from the block entries disagrees with the angular operator of M_- by " +
              std::to_string(rep.angular_mismatch));
  require(linalg::norm2(rep.L) < 1.0 - tol.contract, ErrorCode::InvariantViolation,
          "L is not a uniform contraction");
  require(min_eig(rep.AplusLDL) > tol.pd * s_norm, ErrorCode::InvariantViolation,
          "A' + L D' L^H is not uniformly positive");
  return rep;
}

SpmReport s_pm_block_reps(const BlockRepCork& c, const BlockRepEdinburgh& e,
                          const JFrameOperatorBundle& bundle) {
  const int p = c.decomp.p();
  const int q = c.decomp.q();
  const Mat Zpp = Mat::Zero(p, p), Zpq = Mat::Zero(p, q), Zqp = Mat::Zero(q, p),
            Zqq = Mat::Zero(q, q);
  const double s_norm = linalg::norm2(bundle.S);
  const Mat AK = c.A * c.K;
  const Mat KAK = c.K.adjoint() * AK;

  const Mat cork_plus = embed(c.A, -AK, AK.adjoint(), -KAK);
  const Mat cork_minus = embed(Zpp, Zpq, Zqp, -c.DplusKAK);
  const Mat LD = e.L * e.Dprime;
  const Mat edin_plus = embed(e.AplusLDL, Zpq, Zqp, Zqq);
  const Mat edin_minus = embed(LD * e.L.adjoint(), -LD, LD.adjoint(), -e.Dprime);

  SpmReport r;
  r.cork_plus_error = linalg::rel_diff(c.decomp.from_blocks(cork_plus), bundle.S_plus, s_norm);
  r.cork_minus_error = linalg::rel_diff(c.decomp.from_blocks(cork_minus), bundle.S_minus, s_norm);
  r.edinburgh_plus_error =
      linalg::rel_diff(e.decomp.from_blocks(edin_plus), bundle.S_plus, s_norm);
  r.edinburgh_minus_error =
      linalg::rel_diff(e.decomp.from_blocks(edin_minus), bundle.S_minus, s_norm);
  r.cork_reassembly_error = linalg::rel_diff(c.decomp.from_blocks(c.assemble()), bundle.S, s_norm);
  r.edinburgh_reassembly_error =
      linalg::rel_diff(e.decomp.from_blocks(e.assemble()), bundle.S, s_norm);
  r.ok = std::max({r.cork_plus_error, r.cork_minus_error, r.edinburgh_plus_error,
                   r.edinburgh_minus_error, r.cork_reassembly_error,
                   r.edinburgh_reassembly_error}) <= r.tolerance;
  return r;
}

InverseBlockReps inverse_block_reps(const BlockRepCork& c, const BlockRepEdinburgh& e,
                                    const Mat& S) {
  const int p = c.decomp.p();
  const int q = c.decomp.q();
  InverseBlockReps r;
  r.Z = inverse_of(c.DplusKAK);
  r.Y = inverse_of(e.AplusLDL);
  const Mat Ainv = inverse_of(c.A);
  const Mat Dpinv = inverse_of(e.Dprime);
  const Mat KZ = c.K * r.Z;
  const Mat YL = r.Y * e.L;

  r.Sinv_from_cork =
      c.decomp.from_blocks(embed(Ainv - KZ * c.K.adjoint(), KZ, -KZ.adjoint(), r.Z));
  r.Sinv_from_edinburgh = e.decomp.from_blocks(
      embed(r.Y, -YL, YL.adjoint(), Dpinv - e.L.adjoint() * YL));
  r.Sinv_direct = inverse_of(S);
  const double inv_norm = linalg::norm2(r.Sinv_direct);
  r.cork_error = linalg::rel_diff(r.Sinv_from_cork, r.Sinv_direct, inv_norm);
  r.edinburgh_error = linalg::rel_diff(r.Sinv_from_edinburgh, r.Sinv_direct, inv_norm);

  // the directly computed inverse read in the Cork decomposition
  const Mat Mc = c.decomp.to_blocks(r.Sinv_direct);
  const Mat Dpp = Mc.bottomRightCorner(q, q);
  const Mat Lpp = Mc.topRightCorner(p, q) * inverse_of(Dpp);
  r.duality_error = std::max(
      {rel_to_block(Dpp, r.Z), rel_to_block(Lpp, c.K),
       rel_to_block(Mc.topLeftCorner(p, p) + Lpp * Dpp * Lpp.adjoint(), Ainv),
       rel_to_block(Mc.bottomLeftCorner(q, p), -Dpp * Lpp.adjoint())});

  const Mat Me = e.decomp.to_blocks(r.Sinv_direct);
  const Mat App = Me.topLeftCorner(p, p);
  const Mat Kpp = -inverse_of(App) * Me.topRightCorner(p, q);
  r.duality_error_edinburgh = std::max(
      {rel_to_block(App, r.Y), rel_to_block(Kpp, e.L),
       rel_to_block(Me.bottomRightCorner(q, q) + Kpp.adjoint() * App * Kpp, Dpinv),
       rel_to_block(Me.bottomLeftCorner(q, p), Kpp.adjoint() * App)});

  r.ok = std::max({r.cork_error, r.edinburgh_error, r.duality_error,
                   r.duality_error_edinburgh}) <= r.tolerance;
  require(std::max(r.cork_error, r.edinburgh_error) <= r.tolerance, ErrorCode::InvariantViolation,
          "block inverse disagrees with the direct inverse");
  return r;
}

JFrameBounds jframe_bounds(const BlockRepCork& c, const BlockRepEdinburgh& e, const Frame& F,
                           const Tolerances& tol) {
  JFrameBounds b;
  const RVec bm = linalg::hermitian_eigenvalues(c.DplusKAK);
  const RVec bp = linalg::hermitian_eigenvalues(e.AplusLDL);
  const RVec gp = linalg::hermitian_eigenvalues(inverse_of(c.A));
  const RVec gm = linalg::hermitian_eigenvalues(inverse_of(e.Dprime));
  b.alpha_minus = bm(0);
  b.beta_minus = bm(bm.size() - 1);
  b.alpha_plus = bp(0);
  b.beta_plus = bp(bp.size() - 1);
  b.gamma_plus = gp(0);
  b.delta_plus = gp(gp.size() - 1);
  b.gamma_minus = gm(0);
  b.delta_minus = gm(gm.size() - 1);

  const BoundPair op = frame_bounds_on_definite_subspace(F, +1, tol);
  const BoundPair om = frame_bounds_on_definite_subspace(F, -1, tol);
  auto rel = [](double got, double want) { return std::abs(got - want) / std::abs(want); };
  b.oracle_mismatch = std::max({rel(b.alpha_plus, op.lower), rel(b.beta_plus, op.upper),
                                rel(b.alpha_minus, om.lower), rel(b.beta_minus, om.upper)});
  if (b.oracle_mismatch > 1e-8)
    throw Error(ErrorCode::OracleMismatch,
                "spectral bounds (" + std::to_string(b.alpha_plus) + ", " +
                    std::to_string(b.beta_plus) + ", " + std::to_string(b.alpha_minus) + ", " +
                    std::to_string(b.beta_minus) + ") differ from the restriction oracle (" +
                    std::to_string(op.lower) + ", " + std::to_string(op.upper) + ", " +
                    std::to_string(om.lower) + ", " + std::to_string(om.upper) + ")");
  return b;
}

Frame dual_frame(const Frame& F, const JFrameOperatorBundle& bundle, const Tolerances& tol) {
  const auto lu = bundle.S.partialPivLu();
  Frame dual = build_frame(F.space(), Mat(lu.solve(F.vectors())));
  for (int i = 0; i < F.size(); ++i)
    require(dual.sign_of(i) == F.sign_of(i), ErrorCode::InvariantViolation,
            "dual vector " + std::to_string(i + 1) + " changed sign");

  const JFrameReport rep = is_jframe(dual, tol);
  require(rep.is_jframe, ErrorCode::InvariantViolation,
          "canonical dual is not a J-frame: " + rep.failure_reason());
  const Mat Sinv = lu.inverse();
  const Mat T = dual.synthesis();
  const Mat S_dual = T * krein_adjoint(T, dual.ell2(), dual.space());
  require(linalg::rel_diff(S_dual, Sinv, linalg::norm2(Sinv)) <= 1e-10,
          ErrorCode::InvariantViolation, "J-frame operator of the dual is not S^{-1}");

  const Subspace comp_minus = orthogonal_companion(bundle.m_minus, tol);
  const Subspace comp_plus = orthogonal_companion(bundle.m_plus, tol);
  require(same_subspace(dual.synthesis_plus(), comp_minus.basis(), tol.subspace_angle),
          ErrorCode::InvariantViolation, "span of dual I_+ vectors is not M_-^[perp]");
  require(same_subspace(dual.synthesis_minus(), comp_plus.basis(), tol.subspace_angle),
          ErrorCode::InvariantViolation, "span of dual I_- vectors is not M_+^[perp]");
  return dual;
}

OperatorConditions verify_operator_conditions(const Mat& S, const Subspace& L_plus,
                                              const KreinSpace& space, const Tolerances& tol) {
  const int n = space.dim();
  if (S.rows() != n || S.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "operator does not act on the space");
  const double s_norm = linalg::norm2(S);
  const Mat JS = space.J() * S;
  if (linalg::norm2(JS - JS.adjoint()) > 1e-10 * s_norm)
    throw Error(ErrorCode::InvalidArgument, "operator is not Krein self-adjoint");
  if (linalg::rank(S, tol.rank) < n) throw Error(ErrorCode::SingularS, "operator is singular");
  if (!classify_subspace(L_plus, tol).maximal_uniformly_positive())
    throw Error(ErrorCode::NotMaximalDefinite, "L_+ is not maximal uniformly positive");

  OperatorConditions out;
  const Subspace image = Subspace::span_of(space, S * L_plus.basis(), tol.rank);
  out.image_maximal_positive = classify_subspace(image, tol).maximal_uniformly_positive();

  const Mat V = linalg::column_space(L_plus.basis(), tol.rank);
  out.min_form_on_L = min_eig(V.adjoint() * JS * V);
  out.nonnegative_on_L = out.min_form_on_L >= -tol.pd * s_norm;

  const Subspace comp = orthogonal_companion(image, tol);
  if (comp.is_zero()) {
    out.nonpositive_on_companion = true;
  } else {
    const Mat W = linalg::column_space(comp.basis(), tol.rank);
    const RVec ev = linalg::hermitian_eigenvalues(W.adjoint() * JS * W);
    out.max_form_on_companion = ev(ev.size() - 1);
    out.nonpositive_on_companion = out.max_form_on_companion <= tol.pd * s_norm;
  }
  return out;
}

}  // namespace kf
