#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kreinframes/krein.hpp"

namespace kf {

/// A finite family of vectors in a Krein space with its sign partition.
///
/// Vectors are kept in user order. The synthesis matrix and the coefficient
/// space are in sign-sorted order: all indices with [f_i, f_i] >= 0 first, in
/// their original relative order, then the negative ones. `permutation()[j]`
/// is the user index of sorted column j.
class Frame {
 public:
  const KreinSpace& space() const { return space_; }
  int size() const { return static_cast<int>(vectors_.cols()); }
  int n_plus() const { return static_cast<int>(plus_.size()); }
  int n_minus() const { return static_cast<int>(minus_.size()); }

  /// Columns in user order.
  const Mat& vectors() const { return vectors_; }
  /// [f_i, f_i] in user order.
  const RVec& self_products() const { return self_products_; }
  /// User indices (0-based) of I_+ and I_-.
  const std::vector<int>& plus_indices() const { return plus_; }
  const std::vector<int>& minus_indices() const { return minus_; }
  const std::vector<int>& permutation() const { return permutation_; }

  /// n x N synthesis matrix, sign-sorted.
  const Mat& synthesis() const { return synthesis_; }
  Mat synthesis_plus() const { return synthesis_.leftCols(n_plus()); }
  Mat synthesis_minus() const { return synthesis_.rightCols(n_minus()); }

  /// Coefficient space l2(N) with symmetry diag(+1 x |I_+|, -1 x |I_-|).
  const KreinSpace& ell2() const { return ell2_; }

  /// +1 for I_+ members, -1 otherwise (user order).
  int sign_of(int user_index) const;

 private:
  friend Frame build_frame(const KreinSpace&, const Mat&);
  Frame(KreinSpace space, KreinSpace ell2) : space_(std::move(space)), ell2_(std::move(ell2)) {}

  KreinSpace space_;
  KreinSpace ell2_;
  Mat vectors_;
  RVec self_products_;
  std::vector<int> plus_;
  std::vector<int> minus_;
  std::vector<int> permutation_;
  Mat synthesis_;
};

/// Builds a frame from the columns of `vectors` (n x N, user order).
/// Throws EmptyFamily, DimensionMismatch, or ZeroVector.
Frame build_frame(const KreinSpace& space, const Mat& vectors);
Frame build_frame(const KreinSpace& space, const std::vector<Vec>& vectors);

struct JFrameReport {
  bool is_jframe = false;
  SubspaceClass class_plus;
  SubspaceClass class_minus;
  Subspace m_plus;
  Subspace m_minus;
  bool direct_sum_ok = false;
  std::vector<std::string> failure_reasons;

  /// Reasons joined with "; ", or empty.
  std::string failure_reason() const;
};

inline constexpr const char* kReasonPlusNotMaximal = "R(T₊) not maximal uniformly positive";
inline constexpr const char* kReasonMinusNotMaximal = "R(T₋) not maximal uniformly negative";
inline constexpr const char* kReasonNotDirectSum = "M₊ and M₋ do not span H as a direct sum";
inline constexpr const char* kReasonDefiniteSpace = "the space is definite (p or q is zero)";

/// Definitional J-frame test: R(T_+) maximal uniformly positive and R(T_-)
/// maximal uniformly negative. Failures are report content.
JFrameReport is_jframe(const Frame& F, const Tolerances& tol = {});

/// Characterization through frame inequalities: M_+ and M_- non-degenerate
/// and +-[f, f] dominated from both sides by sum_{I+-} |[f, f_i]|^2 on M_+-.
/// Independent of is_jframe; used to cross-validate it.
bool jframe_by_frame_inequalities(const Frame& F, const Tolerances& tol = {});

struct HilbertBounds {
  double alpha = 0.0;
  double beta = 0.0;
  bool spanning = false;
};

/// Extreme eigenvalues of T T^H; alpha is reported as 0 when the family does
/// not span C^n.
HilbertBounds hilbert_frame_bounds(const Mat& vectors, int n, const Tolerances& tol = {});

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

/// Optimal constants in alpha(+-[f,f]) <= sum_{I+-} |[f, f_i]|^2 <= beta(+-[f,f])
/// over f in M_+- (side = +1 or -1), by direct restriction to M_+-.
/// Throws NotJFrame.
BoundPair frame_bounds_on_definite_subspace(const Frame& F, int side,
                                            const Tolerances& tol = {});

}  // namespace kf
