#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "kreinframes/jframe.hpp"
#include "kreinframes/spectral.hpp"

namespace kf {

enum class SqrtMethod { Triangular, Contour };

std::string to_string(SqrtMethod m);

struct SqrtResult {
  Mat P;
  SqrtMethod method = SqrtMethod::Triangular;
  double residual = 0.0;  // ||P^2 - S|| / ||S||
  bool sector_ok = false;  // every eigenvalue of P has |arg| < pi/4
  double krein_selfadjoint_residual = 0.0;  // ||JP - (JP)^H|| / ||P||
};

/// Principal square root through a Schur triangularization. Throws
/// SpectrumNotInRHP or RecurrenceBreakdown.
SqrtResult principal_sqrt_triangular(const Mat& S, const KreinSpace& space);

struct ContourSpec {
  double center = 1.0;
  double radius = 0.5;
  int nodes = 64;
};

/// Throws ContourTooClose when the circle passes within 1e-3 r of an
/// eigenvalue, InvalidContour when c - r <= 0, nodes < 16, or some eigenvalue
/// sits outside 0.9 r.
void validate_contour(const ContourSpec& contour, const SpectrumData& spec);

/// Trapezoidal rule for (1/2 pi i) \oint sqrt(z) (z - S)^{-1} dz on the circle.
SqrtResult riesz_dunford_sqrt(const Mat& S, const KreinSpace& space, const ContourSpec& contour);

/// Circle enclosing the spectrum with 25% radial margin and c - r >= min Re / 2,
/// chosen to minimize the geometric quadrature rate. Falls back to a 10%
/// margin before throwing CannotEnclose.
ContourSpec default_contour(const SpectrumData& spec, int nodes = 64);

struct PolarResult {
  Mat P;
  Mat U;  // P^{-1} T
  double coisometry_residual = 0.0;  // ||U U^+ - I||
  double reassembly_residual = 0.0;  // ||T - P U|| / ||T||
  Mat initial_projection;  // U^+ U
  double projection_residual = 0.0;  // idempotence, self-adjointness, range
  Subspace initial_space = Subspace::zero(KreinSpace(1, 0));  // N(T)^[perp] in coefficient space
};

/// Polar decomposition T = P U of an operator T from the coefficient space
/// `ell2` into `space`. Throws NonRegularKernel.
PolarResult polar_decompose(const Mat& T, const KreinSpace& ell2, const KreinSpace& space);

/// Polar decomposition of the (sign-sorted) synthesis operator of a J-frame.
PolarResult polar_decompose(const Frame& F);

struct FrameLink {
  Mat W;  // U1^+ U2
  double reassembly_residual = 0.0;  // ||T2 - T1 W|| / ||T2||
  double partial_isometry_residual = 0.0;  // ||W W^+ W - W||
  double final_projection_residual = 0.0;  // ||W W^+ - E1||
  double initial_projection_residual = 0.0;  // ||W^+ W - E2||
};

/// Partial isometry W with T2 = T1 W for two operators with the same T T^+.
/// Throws OperatorMismatch.
FrameLink connect_two_frames(const Mat& T1, const KreinSpace& ell1, const Mat& T2,
                             const KreinSpace& ell2, const KreinSpace& space);

FrameLink connect_two_frames(const Frame& F1, const Frame& F2);

/// exp(G) for a generator with (JG)^H = -JG. Throws InvalidArgument otherwise.
Mat j_unitary_from_generator(const Mat& G, const KreinSpace& signature);

/// exp(J X) with X skew-Hermitian, entries Gaussian of the given scale.
Mat random_j_unitary(const KreinSpace& signature, std::mt19937_64& rng, double scale = 0.5);
Mat random_j_unitary(const KreinSpace& signature, std::uint64_t seed, double scale = 0.5);

/// ||V^+ V - I||.
double j_unitarity_residual(const Mat& V, const KreinSpace& signature);

struct SynthesisResult {
  Mat synthesis;  // T = S^{1/2} U, columns in coefficient order
  KreinSpace ell2{1, 0};  // prescribed coefficient signature
  double operator_residual = 0.0;  // ||T T^+ - S|| / ||S|| under the prescribed signature
  int realized_plus = 0;
  int realized_minus = 0;
  std::vector<int> mismatched;  // coefficients whose vector sign disagrees
  bool sign_mismatch = false;
  bool is_jframe = false;
  std::optional<Frame> frame;  // absent when some vector vanished
  std::string diagnostics;
};

/// A family with frame operator S built from a random co-isometry U and
/// T = S^{1/2} U. Throws SpectrumNotInRHP when S has no sector root.
SynthesisResult synthesize_from_operator(const Mat& S, const KreinSpace& space, int n_plus,
                                         int n_minus, std::uint64_t seed,
                                         double mixing_scale = 0.5);

}  // namespace kf
