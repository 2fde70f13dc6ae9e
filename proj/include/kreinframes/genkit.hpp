#pragma once

#include <cstdint>
#include <random>

#include "kreinframes/jframe.hpp"

namespace kf {

struct GenConfig {
  int p = 1;
  int q = 1;
  int n_plus = 1;
  int n_minus = 1;
  double angular_norm_cap = 0.4;  // ||K|| of the Cork representation, in [0, 0.95]
  double conditioning_cap = 1.5;  // coefficient condition number, in [1, 1e6]
  std::uint64_t seed = 1;
};

/// Throws InvalidArgument naming the offending field.
void validate(const GenConfig& cfg);

/// Haar-distributed unitary (QR of a complex Gaussian with phase correction).
Mat random_unitary(Eigen::Index n, std::mt19937_64& rng);

/// Complex matrix with i.i.d. standard Gaussian real and imaginary parts.
Mat random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Random rows x cols matrix of full row rank with condition number in [1, cap].
Mat random_coefficients(Eigen::Index rows, Eigen::Index cols, double cap, std::mt19937_64& rng);

/// Random J-frame. M- is the graph of a contraction over the negative axes and
/// M+ the graph of a contraction over M-^[perp], so the Cork angular operator
/// is exactly the drawn one. Throws GenerationExhausted after 16 attempts.
Frame random_jframe(const GenConfig& cfg);

/// Worst relative error of both indefinite reconstruction formulas over
/// `trials` random vectors.
double reconstruction_residual(const Frame& F, const JFrameOperatorBundle& bundle, int trials,
                               std::uint64_t seed);

}  // namespace kf
