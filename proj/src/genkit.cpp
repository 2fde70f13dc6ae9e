#include "kreinframes/genkit.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace kf {

namespace {

constexpr int kMaxAttempts = 16;

void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, field + ": " + what);
}

Mat contraction(Eigen::Index rows, Eigen::Index cols, double cap, std::mt19937_64& rng) {
  if (cap == 0.0 || rows == 0 || cols == 0) return Mat::Zero(rows, cols);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mat X = random_gaussian(rows, cols, rng);
  const double nrm = linalg::norm2(X);
  return X * (cap * u(rng) / nrm);
}

std::optional<Frame> attempt(const GenConfig& cfg, const KreinSpace& space, std::mt19937_64& rng) {
  const int p = cfg.p;
  const int q = cfg.q;
  const int n = p + q;

  // M- as the graph of a contraction over the negative axes
  const Mat X = contraction(p, q, cfg.angular_norm_cap, rng);
  Mat minus_basis(n, q);
  minus_basis.topRows(p) = X;
  minus_basis.bottomRows(q) = Mat::Identity(q, q);
  const FundamentalDecomposition decomp =
      fundamental_decomposition_from(Subspace(space, minus_basis));

  // M+ = {E+ y + E- K^H y}, whose companion has angular operator K
  const Mat K = contraction(p, q, cfg.angular_norm_cap, rng);
  const Mat plus_graph = decomp.onb_plus + decomp.onb_minus * K.adjoint();
  const Mat plus_onb = orthonormalize_definite(Subspace(space, plus_graph), +1);

  const Mat C_plus = random_coefficients(p, cfg.n_plus, cfg.conditioning_cap, rng);
  const Mat C_minus = random_coefficients(q, cfg.n_minus, cfg.conditioning_cap, rng);
  Mat vectors(n, cfg.n_plus + cfg.n_minus);
  vectors.leftCols(cfg.n_plus) = plus_onb * C_plus;
  vectors.rightCols(cfg.n_minus) = decomp.onb_minus * C_minus;

  const double largest = vectors.colwise().norm().maxCoeff();
  if (vectors.colwise().norm().minCoeff() < 1e-3 * largest) return std::nullopt;

  std::vector<int> order(vectors.cols());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  Mat shuffled(n, vectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) shuffled.col(i) = vectors.col(order[i]);

  Frame F = build_frame(space, shuffled);
  if (F.n_plus() != cfg.n_plus || !is_jframe(F).is_jframe) return std::nullopt;
  return F;
}

}  // namespace

void validate(const GenConfig& cfg) {
  if (cfg.p < 1) fail("p", "must be at least 1");
  if (cfg.q < 1) fail("q", "must be at least 1");
  if (cfg.n_plus < cfg.p) fail("n_plus", "must be at least p");
  if (cfg.n_minus < cfg.q) fail("n_minus", "must be at least q");
  if (!(cfg.angular_norm_cap >= 0.0 && cfg.angular_norm_cap <= 0.95))
    fail("angular_norm_cap", "must lie in [0, 0.95]");
  if (!(cfg.conditioning_cap >= 1.0 && cfg.conditioning_cap <= 1e6))
    fail("conditioning_cap", "must lie in [1, 1e6]");
}

Mat random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat Z(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) Z(i, j) = cplx(g(rng), g(rng));
  return Z;
}

Mat random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(random_gaussian(n, n, rng));
  Mat Q = qr.householderQ();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = qr.matrixQR()(j, j);
    if (std::abs(d) > 0.0) Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

Mat random_coefficients(Eigen::Index rows, Eigen::Index cols, double cap, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1.0, cap);
  const Mat left = random_unitary(rows, rng);
  const Mat right = random_unitary(cols, rng).leftCols(rows);
  RVec s(rows);
  for (Eigen::Index i = 0; i < rows; ++i) s(i) = cap > 1.0 ? u(rng) : 1.0;
  if (rows > 0 && cap > 1.0) {
    s(0) = 1.0;
    if (rows > 1) s(rows - 1) = cap;
  }
  return left * s.cast<cplx>().asDiagonal() * right.adjoint();
}

Frame random_jframe(const GenConfig& cfg) {
  validate(cfg);
  const KreinSpace space(cfg.p, cfg.q);
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < kMaxAttempts; ++i) {
    if (auto F = attempt(cfg, space, rng)) return *F;
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no J-frame generated in 16 attempts; relax the caps");
}

double reconstruction_residual(const Frame& F, const JFrameOperatorBundle& bundle, int trials,
                               std::uint64_t seed) {
  const Mat& T = F.vectors();
  const Mat& J = F.space().J();
  const Mat Sinv = bundle.S.partialPivLu().inverse();
  RVec sign(T.cols());
  for (Eigen::Index i = 0; i < T.cols(); ++i) sign(i) = F.sign_of(static_cast<int>(i));
  const Mat signed_T = T * sign.cast<cplx>().asDiagonal();
  const Mat first = signed_T * (Sinv * T).adjoint() * J;   // sum s_i [f, S^-1 f_i] f_i
  const Mat second = Sinv * signed_T * T.adjoint() * J;    // sum s_i [f, f_i] S^-1 f_i

  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vec f = random_gaussian(T.rows(), 1, rng);
    const double nf = f.norm();
    worst = std::max(worst, (f - first * f).norm() / nf);
    worst = std::max(worst, (f - second * f).norm() / nf);
  }
  return worst;
}

}  // namespace kf
