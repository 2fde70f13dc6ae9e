#pragma once

#include <string>
#include <vector>

#include "kreinframes/frames.hpp"

namespace kf {

/// S = T T^+, the positive parts S_+-, and Q = P_{M_+ // M_-}.
struct JFrameOperatorBundle {
  Mat S;
  Mat S_plus;
  Mat S_minus;
  Mat Q;
  Subspace m_plus;
  Subspace m_minus;
  Frame frame;
};

/// Throws NotJFrame, or InvariantViolation if a defining identity fails.
JFrameOperatorBundle jframe_operator(const Frame& F, const Tolerances& tol = {});

/// S = [[A, -AK], [K^H A, D]] with respect to (M_-^[perp], M_-).
///
/// Entries are coordinates in [.,.]-orthonormal columns; the minus half
/// carries -[.,.], so A, D and D + K^H A K are ordinary Hermitian matrices and
/// ||K|| is the ordinary spectral norm.
struct BlockRepCork {
  FundamentalDecomposition decomp;
  Mat A;
  Mat K;
  Mat D;
  Mat DplusKAK;
  /// The four raw blocks of S in decomposition coordinates.
  Mat blocks;
  /// ||K_block - K_angular|| where K_angular is the angular operator of M_+^[perp].
  double angular_mismatch = 0.0;

  Mat assemble() const;
};

/// S = [[A', L D'], [-D' L^H, D']] with respect to (M_+, M_+^[perp]).
struct BlockRepEdinburgh {
  FundamentalDecomposition decomp;
  Mat Aprime;
  Mat L;
  Mat Dprime;
  Mat AplusLDL;
  Mat blocks;
  double angular_mismatch = 0.0;

  Mat assemble() const;
};

/// Throws RepresentationInconsistent when the recovered K disagrees with the
/// angular operator beyond 1e-8, InvariantViolation when A, D + K^H A K are not
/// positive definite or ||K|| >= 1.
BlockRepCork block_rep_cork(const JFrameOperatorBundle& bundle, const Tolerances& tol = {});
BlockRepEdinburgh block_rep_edinburgh(const JFrameOperatorBundle& bundle,
                                      const Tolerances& tol = {});

struct SpmReport {
  double cork_plus_error = 0.0;
  double cork_minus_error = 0.0;
  double edinburgh_plus_error = 0.0;
  double edinburgh_minus_error = 0.0;
  double cork_reassembly_error = 0.0;
  double edinburgh_reassembly_error = 0.0;
  double tolerance = 1e-10;
  bool ok = false;
};

/// Block forms of S_+- in both decompositions, compared in ambient coordinates
/// against the bundle (errors relative to ||S||).
SpmReport s_pm_block_reps(const BlockRepCork& rep_c, const BlockRepEdinburgh& rep_e,
                          const JFrameOperatorBundle& bundle);

struct InverseBlockReps {
  Mat Z;  // (D + K^H A K)^{-1}
  Mat Y;  // (A' + L D' L^H)^{-1}
  Mat Sinv_from_cork;
  Mat Sinv_from_edinburgh;
  Mat Sinv_direct;
  double cork_error = 0.0;       // relative to ||S^{-1}||
  double edinburgh_error = 0.0;
  /// S^{-1} in Cork coordinates has the Edinburgh shape with D' = Z, L = K,
  /// A' + L D' L^H = A^{-1}; largest deviation among the three.
  double duality_error = 0.0;
  /// S^{-1} in Edinburgh coordinates has the Cork shape with A = Y, K = L,
  /// D + K^H A K = D'^{-1}.
  double duality_error_edinburgh = 0.0;
  double tolerance = 1e-9;
  bool ok = false;
};

/// Throws InvariantViolation on a mismatch beyond 1e-9 ||S^{-1}||.
InverseBlockReps inverse_block_reps(const BlockRepCork& rep_c, const BlockRepEdinburgh& rep_e,
                                    const Mat& S);

/// J-frame bounds and dual J-frame bounds.
struct JFrameBounds {
  double alpha_plus = 0, beta_plus = 0, alpha_minus = 0, beta_minus = 0;
  double gamma_plus = 0, delta_plus = 0, gamma_minus = 0, delta_minus = 0;
  /// Largest relative deviation from the restriction oracle (primal pairs).
  double oracle_mismatch = 0.0;
};

/// Extreme eigenvalues of D + K^H A K, A' + L D' L^H, A^{-1} and D'^{-1}.
/// The primal pairs are checked against frame_bounds_on_definite_subspace;
/// throws OracleMismatch beyond 1e-8 relative.
JFrameBounds jframe_bounds(const BlockRepCork& rep_c, const BlockRepEdinburgh& rep_e,
                           const Frame& F, const Tolerances& tol = {});

/// Canonical dual {S^{-1} f_i}, in user order. Throws InvariantViolation when
/// sign preservation, the dual operator identity or the span identities fail.
Frame dual_frame(const Frame& F, const JFrameOperatorBundle& bundle, const Tolerances& tol = {});

struct OperatorConditions {
  bool image_maximal_positive = false;  // S(L_+) maximal uniformly positive
  bool nonnegative_on_L = false;        // [Sf, f] >= 0 on L_+
  bool nonpositive_on_companion = false;  // [Sg, g] <= 0 on S(L_+)^[perp]
  double min_form_on_L = 0.0;
  double max_form_on_companion = 0.0;

  bool all() const {
    return image_maximal_positive && nonnegative_on_L && nonpositive_on_companion;
  }
};

/// Checks the three operator conditions for a caller-supplied L_+.
/// Throws SingularS, InvalidArgument (JS not Hermitian) or NotMaximalDefinite
/// (L_+ is not maximal uniformly positive).
OperatorConditions verify_operator_conditions(const Mat& S, const Subspace& L_plus,
                                              const KreinSpace& space,
                                              const Tolerances& tol = {});

}  // namespace kf
