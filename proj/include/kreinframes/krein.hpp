#pragma once

#include <memory>
#include <optional>
#include <string>

#include "kreinframes/common.hpp"

namespace kf {

/// A finite-dimensional Krein space C^n with fundamental symmetry J.
///
/// The indefinite product is [x, y] = y^H J x: linear in the first slot,
/// conjugate-linear in the second. Any Hermitian involution is accepted; it is
/// diagonalized once so that `to_canonical()` maps coordinates onto the
/// canonical symmetry diag(+1 x p, -1 x q).
class KreinSpace {
 public:
  /// Canonical space with J = diag(+1 x p, -1 x q).
  KreinSpace(int p, int q);

  /// Arbitrary Hermitian involution. Throws InvalidArgument otherwise.
  static KreinSpace from_symmetry(const Mat& J, double tol = 1e-12);

  int dim() const { return p_ + q_; }
  int p() const { return p_; }
  int q() const { return q_; }
  const Mat& J() const { return *J_; }
  bool is_canonical() const { return canonical_; }

  /// Unitary W with W^H J W = diag(+1 x p, -1 x q).
  const Mat& to_canonical() const { return *W_; }

  /// [x, y] = y^H J x.
  cplx inner(const Vec& x, const Vec& y) const;

  bool operator==(const KreinSpace& other) const;

 private:
  KreinSpace(int p, int q, std::shared_ptr<const Mat> J, std::shared_ptr<const Mat> W,
             bool canonical);

  int p_;
  int q_;
  std::shared_ptr<const Mat> J_;
  std::shared_ptr<const Mat> W_;
  bool canonical_;
};

/// [x, y] in `space`. Throws DimensionMismatch on length errors.
cplx indefinite_inner(const Vec& x, const Vec& y, const KreinSpace& space);

/// Krein adjoint of T : source -> target, i.e. J_source T^H J_target.
Mat krein_adjoint(const Mat& T, const KreinSpace& source, const KreinSpace& target);

/// Subspace of a Krein space given by a full-column-rank basis. A basis with
/// zero columns represents the zero subspace.
class Subspace {
 public:
  /// Validates the column rank against `rank_tol`.
  Subspace(KreinSpace ambient, Mat basis, double rank_tol = 1e-10);

  /// Column space of an arbitrary (possibly rank-deficient) spanning set.
  static Subspace span_of(const KreinSpace& ambient, const Mat& vectors,
                          double rank_tol = 1e-10);

  static Subspace zero(const KreinSpace& ambient);

  const KreinSpace& ambient() const { return ambient_; }
  const Mat& basis() const { return basis_; }
  const Mat& gram() const { return gram_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  bool is_zero() const { return basis_.cols() == 0; }

 private:
  KreinSpace ambient_;
  Mat basis_;
  Mat gram_;
};

enum class SubspaceTag {
  UniformlyPositive,
  UniformlyNegative,
  NonNegative,
  NonPositive,
  Neutral,
  Indefinite,
  Degenerate,
};

std::string to_string(SubspaceTag tag);

struct SubspaceClass {
  SubspaceTag tag = SubspaceTag::Neutral;
  bool maximal = false;
  bool degenerate = false;
  /// Extreme eigenvalues of the gram matrix on a Hilbert-orthonormal basis.
  double min_eig = 0.0;
  double max_eig = 0.0;

  bool maximal_uniformly_positive() const {
    return tag == SubspaceTag::UniformlyPositive && maximal;
  }
  bool maximal_uniformly_negative() const {
    return tag == SubspaceTag::UniformlyNegative && maximal;
  }
};

/// Classification by the eigenvalues of the gram matrix, taken on a
/// Hilbert-orthonormal basis so that the margin is relative to ||x||^2.
SubspaceClass classify_subspace(const Subspace& M, const Tolerances& tol = {});

/// M^[perp] = {x : [x, m] = 0 for all m in M}; the zero subspace when M = H.
Subspace orthogonal_companion(const Subspace& M, const Tolerances& tol = {});

/// Basis b of M with [b_i, b_j] = sign * delta_ij. Throws NotDefinite.
Mat orthonormalize_definite(const Subspace& M, int sign);

/// Fundamental decomposition H = plus [+] minus with [.,.]-orthonormal
/// columns. `induced_symmetry` is E_plus - E_minus for the self-adjoint
/// projections onto the two halves.
struct FundamentalDecomposition {
  Subspace plus;
  Subspace minus;
  Mat onb_plus;
  Mat onb_minus;
  Mat induced_symmetry;

  int p() const { return static_cast<int>(onb_plus.cols()); }
  int q() const { return static_cast<int>(onb_minus.cols()); }

  /// Columns [onb_plus onb_minus]; maps block coordinates to ambient vectors.
  Mat basis() const;
  /// Inverse of basis(): J0 basis()^H J.
  Mat coordinates() const;
  /// Block matrix of an ambient operator: coordinates() * S * basis().
  Mat to_blocks(const Mat& S) const;
  /// Ambient operator of a block matrix.
  Mat from_blocks(const Mat& blocks) const;
};

/// Decomposition (M^[perp], M) for a maximal uniformly negative M.
FundamentalDecomposition fundamental_decomposition_from(const Subspace& M_minus,
                                                        const Tolerances& tol = {});

/// Decomposition (M, M^[perp]) for a maximal uniformly positive M.
FundamentalDecomposition fundamental_decomposition_from_plus(const Subspace& M_plus,
                                                             const Tolerances& tol = {});

/// Angular operator of a maximal uniformly definite subspace L. A negative L
/// is the graph {K x_- + x_-} over the minus half (K is p x q); a positive L
/// is the graph {x_+ + K x_+} over the plus half (K is q x p). Coordinates are
/// taken in the decomposition's orthonormal columns.
struct AngularOperator {
  Mat matrix;
  double norm = 0.0;
  /// +1 when L is positive (graph over plus), -1 when negative.
  int sign = -1;
  FundamentalDecomposition source_decomp;

  /// Basis of the graph subspace rebuilt from `matrix`.
  Mat graph_basis() const;
};

AngularOperator angular_operator(const Subspace& L, const FundamentalDecomposition& decomp,
                                 const Tolerances& tol = {});

/// Projection with the given range and kernel. Throws NotComplementary.
Mat oblique_projection(const Subspace& range, const Subspace& kernel,
                       const Tolerances& tol = {});

/// Basis-independent subspace equality via the largest principal angle.
bool same_subspace(const Mat& a, const Mat& b, double angle_tol = 1e-8);

}  // namespace kf
