#include <cmath>

#include "helpers.hpp"

using namespace kf;
using kft::mat;

namespace {

Frame generated(int p, int q, std::uint64_t seed, double cap = 0.4, double cond = 1.5) {
  GenConfig cfg;
  cfg.p = p;
  cfg.q = q;
  cfg.n_plus = p + static_cast<int>(seed % (p + 1));
  cfg.n_minus = q + static_cast<int>(seed % (q + 1));
  cfg.angular_norm_cap = cap;
  cfg.conditioning_cap = cond;
  cfg.seed = seed;
  return random_jframe(cfg);
}

}  // namespace

TEST_CASE("frame operator of the two-vector example") {
  const JFrameOperatorBundle b = jframe_operator(kft::re1());
  CHECK_MAT(b.S, mat({{0.0, 2.0}, {-2.0, 4.0}}), 1e-15);
  CHECK_MAT(b.S_plus, mat({{1.0, 0.0}, {0.0, 0.0}}), 1e-15);
  CHECK_MAT(b.S_minus, mat({{1.0, -2.0}, {2.0, -4.0}}), 1e-15);
  CHECK_MAT(b.Q, mat({{1.0, -0.5}, {0.0, 0.0}}), 1e-15);
}

TEST_CASE("frame operator of an orthonormal basis and scaling") {
  const JFrameOperatorBundle b = jframe_operator(kft::canonical(1, 1));
  CHECK_MAT(b.S, Mat::Identity(2, 2), 0.0);
  CHECK_MAT(b.S_plus, mat({{1.0, 0.0}, {0.0, 0.0}}), 0.0);
  CHECK_MAT(b.S_minus, mat({{0.0, 0.0}, {0.0, -1.0}}), 0.0);
  CHECK(linalg::hermitian_eigenvalues(b.frame.space().J() * b.S_minus)(0) >= 0.0);
  CHECK_MAT(b.Q, mat({{1.0, 0.0}, {0.0, 0.0}}), 1e-15);

  const Frame F = generated(2, 1, 4);
  const double c = 2.5;
  const Frame scaled = build_frame(F.space(), F.vectors() * std::sqrt(c));
  CHECK(linalg::norm2(jframe_operator(scaled).S - c * jframe_operator(F).S) <=
        1e-13 * c * linalg::norm2(jframe_operator(F).S));
  CHECK_THROWS_AS(jframe_operator(build_frame(KreinSpace(1, 1), mat({{1.0, 1.0}, {0.0, 1.0}}))), Error);
}

TEST_CASE("Cork representation") {
  const JFrameOperatorBundle b = jframe_operator(kft::re1());
  const BlockRepCork c = block_rep_cork(b);
  CHECK_MAT(c.A, mat({{4.0 / 3.0}}), 1e-14);
  CHECK_MAT(c.K, mat({{-0.5}}), 1e-14);
  CHECK_MAT(c.D, mat({{8.0 / 3.0}}), 1e-14);
  CHECK_MAT(c.DplusKAK, mat({{3.0}}), 1e-14);
  CHECK_MAT(c.blocks, mat({{4.0 / 3.0, 2.0 / 3.0}, {-2.0 / 3.0, 8.0 / 3.0}}), 1e-14);
  CHECK_MAT(c.decomp.from_blocks(c.assemble()), b.S, 1e-14);

  const BlockRepCork i = block_rep_cork(jframe_operator(kft::canonical(2, 1)));
  CHECK_MAT(i.A, Mat::Identity(2, 2), 1e-14);
  CHECK(linalg::norm2(i.K) <= 1e-14);
  CHECK_MAT(i.D, Mat::Identity(1, 1), 1e-14);
}

TEST_CASE("Edinburgh representation") {
  const JFrameOperatorBundle b = jframe_operator(kft::re1());
  const BlockRepEdinburgh e = block_rep_edinburgh(b);
  CHECK_MAT(e.Aprime, mat({{0.0}}), 1e-14);
  CHECK_MAT(e.L, mat({{0.5}}), 1e-14);
  CHECK_MAT(e.Dprime, mat({{4.0}}), 1e-14);
  CHECK_MAT(e.AplusLDL, mat({{1.0}}), 1e-14);
  CHECK(linalg::norm2(e.L) < 1.0);
  CHECK_MAT(e.decomp.from_blocks(e.assemble()), b.S, 1e-14);

  const BlockRepEdinburgh i = block_rep_edinburgh(jframe_operator(kft::canonical(1, 2)));
  CHECK_MAT(i.Aprime, Mat::Identity(1, 1), 1e-14);
  CHECK(linalg::norm2(i.L) <= 1e-14);
  CHECK_MAT(i.Dprime, Mat::Identity(2, 2), 1e-14);
}

TEST_CASE("block forms of the positive parts") {
  const JFrameOperatorBundle b = jframe_operator(kft::re1());
  const BlockRepCork c = block_rep_cork(b);
  const BlockRepEdinburgh e = block_rep_edinburgh(b);
  CHECK_MAT(c.decomp.from_blocks(mat({{0.0, 0.0}, {0.0, -3.0}})), mat({{1.0, -2.0}, {2.0, -4.0}}), 1e-14);
  CHECK_MAT(e.decomp.from_blocks(mat({{1.0, 0.0}, {0.0, 0.0}})), mat({{1.0, 0.0}, {0.0, 0.0}}), 1e-15);
  const SpmReport r = s_pm_block_reps(c, e, b);
  CHECK(r.ok);
  CHECK(r.cork_plus_error <= 1e-14);
  CHECK(r.cork_minus_error <= 1e-14);
  CHECK(r.edinburgh_plus_error <= 1e-14);
  CHECK(r.edinburgh_minus_error <= 1e-14);

  const JFrameOperatorBundle ib = jframe_operator(kft::canonical(2, 2));
  const SpmReport ir = s_pm_block_reps(block_rep_cork(ib), block_rep_edinburgh(ib), ib);
  CHECK(ir.ok);
}

TEST_CASE("inverse block forms") {
  const JFrameOperatorBundle b = jframe_operator(kft::re1());
  const BlockRepCork c = block_rep_cork(b);
  const BlockRepEdinburgh e = block_rep_edinburgh(b);
  const InverseBlockReps inv = inverse_block_reps(c, e, b.S);
  CHECK_MAT(inv.Z, mat({{1.0 / 3.0}}), 1e-14);
  CHECK_MAT(inv.Y, mat({{1.0}}), 1e-14);
  const Mat Sinv = mat({{1.0, -0.5}, {0.5, 0.0}});
  CHECK_MAT(inv.Sinv_from_cork, Sinv, 1e-14);
  CHECK_MAT(inv.Sinv_from_edinburgh, Sinv, 1e-14);
  CHECK_MAT(c.decomp.to_blocks(inv.Sinv_from_cork).topLeftCorner(1, 1), mat({{2.0 / 3.0}}), 1e-14);
  CHECK_MAT(e.decomp.to_blocks(inv.Sinv_from_edinburgh).bottomRightCorner(1, 1), mat({{0.0}}), 1e-14);
  CHECK(inv.ok);
  CHECK(inv.duality_error <= 1e-12);
  CHECK(inv.duality_error_edinburgh <= 1e-12);

  const JFrameOperatorBundle ib = jframe_operator(kft::canonical(1, 1));
  const InverseBlockReps ii = inverse_block_reps(block_rep_cork(ib), block_rep_edinburgh(ib), ib.S);
  CHECK_MAT(ii.Sinv_from_cork, Mat::Identity(2, 2), 1e-14);
  CHECK_MAT(ii.Sinv_from_edinburgh, Mat::Identity(2, 2), 1e-14);
}

TEST_CASE("J-frame bounds") {
  const Frame F = kft::re1();
  const JFrameOperatorBundle b = jframe_operator(F);
  const JFrameBounds jb = jframe_bounds(block_rep_cork(b), block_rep_edinburgh(b), F);
  CHECK(std::abs(jb.alpha_minus - 3.0) <= 1e-13);
  CHECK(std::abs(jb.beta_minus - 3.0) <= 1e-13);
  CHECK(std::abs(jb.alpha_plus - 1.0) <= 1e-13);
  CHECK(std::abs(jb.beta_plus - 1.0) <= 1e-13);
  CHECK(std::abs(jb.gamma_plus - 0.75) <= 1e-13);
  CHECK(std::abs(jb.delta_plus - 0.75) <= 1e-13);
  CHECK(std::abs(jb.gamma_minus - 0.25) <= 1e-13);
  CHECK(std::abs(jb.delta_minus - 0.25) <= 1e-13);
  CHECK(std::abs(jb.alpha_minus - frame_bounds_on_definite_subspace(F, -1).lower) <= 1e-13);

  const Frame C = kft::canonical(2, 3);
  const JFrameOperatorBundle cb = jframe_operator(C);
  const JFrameBounds one = jframe_bounds(block_rep_cork(cb), block_rep_edinburgh(cb), C);
  for (double v : {one.alpha_plus, one.beta_plus, one.alpha_minus, one.beta_minus, one.gamma_plus,
                   one.delta_plus, one.gamma_minus, one.delta_minus})
    CHECK(std::abs(v - 1.0) <= 1e-13);
}

TEST_CASE("canonical dual frame") {
  const Frame F = kft::re1();
  const JFrameOperatorBundle b = jframe_operator(F);
  const Frame D = dual_frame(F, b);
  CHECK_MAT(D.vectors(), mat({{1.0, 0.0}, {0.5, 0.5}}), 1e-14);
  CHECK(D.sign_of(0) == 1);
  CHECK(D.sign_of(1) == -1);
  CHECK(same_subspace(D.synthesis_minus(), kft::vec({0.0, 1.0})));

  const Frame C = kft::canonical(2, 1);
  CHECK_MAT(dual_frame(C, jframe_operator(C)).vectors(), C.vectors(), 1e-15);
}

TEST_CASE("operator conditions with a caller-supplied positive subspace") {
  const KreinSpace H(1, 1);
  const Mat S = jframe_operator(kft::re1()).S;
  const OperatorConditions oc = verify_operator_conditions(S, Subspace(H, kft::vec({2.0, 1.0})), H);
  CHECK(oc.image_maximal_positive);
  CHECK(oc.nonnegative_on_L);
  CHECK(oc.nonpositive_on_companion);

  const KreinSpace H3(2, 1);
  const Mat I = Mat::Identity(3, 3);
  CHECK(verify_operator_conditions(I, Subspace(H3, I.leftCols(2)), H3).all());
  CHECK_THROWS_AS(verify_operator_conditions(I, Subspace(H3, I.rightCols(1)), H3), Error);
  CHECK_THROWS_AS(verify_operator_conditions(Mat::Zero(3, 3), Subspace(H3, I.leftCols(2)), H3), Error);
}

TEST_CASE("properties of generated J-frame operators") {
  for (auto [p, q] : {std::pair{1, 1}, {2, 1}, {3, 2}, {4, 4}}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Frame F = generated(p, q, seed);
      const KreinSpace& H = F.space();
      const JFrameOperatorBundle b = jframe_operator(F);
      const double s = linalg::norm2(b.S);
      const int n = p + q;
      const Mat I = Mat::Identity(n, n);

      CHECK(linalg::norm2(b.S - b.S_plus + b.S_minus) <= 1e-12 * s);
      CHECK(linalg::norm2(b.Q * b.S - b.S_plus) <= 1e-12 * s);
      CHECK(linalg::norm2((I - b.Q) * b.S + b.S_minus) <= 1e-12 * s);
      const Mat JS = H.J() * b.S;
      CHECK(linalg::norm2(JS - JS.adjoint()) <= 1e-12 * s);
      CHECK(linalg::hermitian_eigenvalues(H.J() * b.S_plus)(0) >= -1e-10);
      CHECK(linalg::hermitian_eigenvalues(H.J() * b.S_minus)(0) >= -1e-10);

      // S maps M_-^[perp] onto M_+ and M_+^[perp] onto M_-
      CHECK(linalg::subspace_gap(b.S * orthogonal_companion(b.m_minus).basis(), b.m_plus.basis()) <= 1e-8);
      CHECK(linalg::subspace_gap(b.S * orthogonal_companion(b.m_plus).basis(), b.m_minus.basis()) <= 1e-8);

      const BlockRepCork c = block_rep_cork(b);
      const BlockRepEdinburgh e = block_rep_edinburgh(b);
      CHECK(linalg::norm2(c.decomp.from_blocks(c.assemble()) - b.S) <= 1e-10 * s);
      CHECK(linalg::norm2(e.decomp.from_blocks(e.assemble()) - b.S) <= 1e-10 * s);
      CHECK(linalg::norm2(c.K) < 1.0);
      CHECK(linalg::norm2(e.L) < 1.0);
      CHECK(linalg::hermitian_eigenvalues(c.A)(0) > 0.0);
      CHECK(linalg::hermitian_eigenvalues(c.DplusKAK)(0) > 0.0);
      CHECK(linalg::hermitian_eigenvalues(e.Dprime)(0) > 0.0);
      CHECK(linalg::hermitian_eigenvalues(e.AplusLDL)(0) > 0.0);

      // Q in Cork coordinates is [[I, 0], [K^H, 0]]
      Mat Qblock = Mat::Zero(n, n);
      Qblock.topLeftCorner(p, p).setIdentity();
      Qblock.bottomLeftCorner(q, p) = c.K.adjoint();
      CHECK(linalg::norm2(c.decomp.to_blocks(b.Q) - Qblock) <= 1e-10);

      // S = [[I, 0], [K^H, I]] diag(A, D + K^H A K) [[I, -K], [0, I]]
      Mat lower = Mat::Identity(n, n), upper = Mat::Identity(n, n), mid = Mat::Zero(n, n);
      lower.bottomLeftCorner(q, p) = c.K.adjoint();
      upper.topRightCorner(p, q) = -c.K;
      mid.topLeftCorner(p, p) = c.A;
      mid.bottomRightCorner(q, q) = c.DplusKAK;
      CHECK(linalg::norm2(lower * mid * upper - c.blocks) <= 1e-12 * s);

      CHECK(s_pm_block_reps(c, e, b).ok);
      const InverseBlockReps inv = inverse_block_reps(c, e, b.S);
      CHECK(inv.ok);
      const JFrameBounds jb = jframe_bounds(c, e, F);
      CHECK(jb.oracle_mismatch <= 1e-8);
      CHECK(0.0 < jb.alpha_plus);
      CHECK(jb.alpha_plus <= jb.beta_plus);
      CHECK(0.0 < jb.gamma_minus);
      CHECK(jb.gamma_minus <= jb.delta_minus);

      CHECK(reconstruction_residual(F, b, 50, seed) <= 1e-8);
      const Frame D = dual_frame(F, b);
      const Frame DD = dual_frame(D, jframe_operator(D));
      CHECK(linalg::norm2(DD.vectors() - F.vectors()) <= 1e-8 * linalg::norm2(F.vectors()));

      CHECK(verify_operator_conditions(b.S, orthogonal_companion(b.m_minus), H).all());
    }
  }
}
