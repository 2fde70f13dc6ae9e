#include "kreinframes/sqrtpolar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace kf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_square(const Mat& S, const KreinSpace& space) {
  if (S.rows() != S.cols() || S.rows() != space.dim())
    throw Error(ErrorCode::DimensionMismatch, "operator size does not match the space");
}

void require_right_half_plane(const Mat& S) {
  const SpectrumData spec = spectrum(S);
  const double floor = 1e-14 * std::max(1.0, linalg::norm2(S));
  if (spec.real_part_min <= floor)
    throw Error(ErrorCode::SpectrumNotInRHP, "spectrum is not contained in the open right half-plane");
}

void fill_diagnostics(SqrtResult& r, const Mat& S, const KreinSpace& space) {
  const double s_norm = std::max(linalg::norm2(S), 1e-300);
  const double p_norm = std::max(linalg::norm2(r.P), 1e-300);
  r.residual = linalg::norm2(r.P * r.P - S) / s_norm;
  const Mat JP = space.J() * r.P;
  r.krein_selfadjoint_residual = linalg::norm2(JP - JP.adjoint()) / p_norm;
  Eigen::ComplexEigenSolver<Mat> es(r.P, false);
  r.sector_ok = es.info() == Eigen::Success;
  for (Eigen::Index i = 0; r.sector_ok && i < es.eigenvalues().size(); ++i)
    r.sector_ok = std::abs(std::arg(es.eigenvalues()(i))) < kPi / 4.0;
}

}  // namespace

std::string to_string(SqrtMethod m) {
  return m == SqrtMethod::Triangular ? "triangular" : "contour";
}

SqrtResult principal_sqrt_triangular(const Mat& S, const KreinSpace& space) {
  require_square(S, space);
  require_right_half_plane(S);
  const auto n = S.rows();
  Eigen::ComplexSchur<Mat> schur(S);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::EigenSolverFailure, "Schur decomposition did not converge");
  const Mat& T = schur.matrixT();
  const Mat& Q = schur.matrixU();

  Mat R = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) R(i, i) = std::sqrt(T(i, i));
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      cplx acc = T(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= R(i, k) * R(k, j);
      const cplx denom = R(i, i) + R(j, j);
      if (std::abs(denom) <= 1e-14 * (std::abs(R(i, i)) + std::abs(R(j, j)) + 1e-300))
        throw Error(ErrorCode::RecurrenceBreakdown, "diagonal square roots cancel in the recurrence");
      R(i, j) = acc / denom;
    }
  }
  SqrtResult r;
  r.method = SqrtMethod::Triangular;
  r.P = Q * R * Q.adjoint();
  fill_diagnostics(r, S, space);
  return r;
}

void validate_contour(const ContourSpec& contour, const SpectrumData& spec) {
  for (const cplx& z : spec.eigenvalues) {
    const double gap = std::abs(std::abs(z - contour.center) - contour.radius);
    if (gap < 1e-3 * contour.radius)
      throw Error(ErrorCode::ContourTooClose, "contour passes too close to an eigenvalue");
  }
  if (!(contour.radius > 0.0) || contour.center - contour.radius <= 0.0)
    throw Error(ErrorCode::InvalidContour, "contour must stay in the open right half-plane");
  if (contour.nodes < 16) throw Error(ErrorCode::InvalidContour, "contour needs at least 16 nodes");
  for (const cplx& z : spec.eigenvalues)
    if (std::abs(z - contour.center) > 0.9 * contour.radius)
      throw Error(ErrorCode::InvalidContour, "an eigenvalue lies within 10% of the contour radius");
}

SqrtResult riesz_dunford_sqrt(const Mat& S, const KreinSpace& space, const ContourSpec& contour) {
  require_square(S, space);
  validate_contour(contour, spectrum(S));
  const auto n = S.rows();
  const Mat I = Mat::Identity(n, n);
  Mat acc = Mat::Zero(n, n);
  for (int k = 0; k < contour.nodes; ++k) {
    const double theta = 2.0 * kPi * k / contour.nodes;
    const cplx w = contour.radius * std::polar(1.0, theta);
    const cplx z = contour.center + w;
    acc += (std::sqrt(z) * w) * (z * I - S).partialPivLu().inverse();
  }
  SqrtResult r;
  r.method = SqrtMethod::Contour;
  r.P = acc / static_cast<double>(contour.nodes);
  fill_diagnostics(r, S, space);
  return r;
}

ContourSpec default_contour(const SpectrumData& spec, int nodes) {
  if (spec.eigenvalues.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  double min_re = spec.eigenvalues.front().real();
  double max_abs = 0.0;
  for (const cplx& z : spec.eigenvalues) {
    min_re = std::min(min_re, z.real());
    max_abs = std::max(max_abs, std::abs(z));
  }
  if (min_re <= 0.0)
    throw Error(ErrorCode::SpectrumNotInRHP, "spectrum is not contained in the open right half-plane");

  std::vector<double> centers;
  const int grid = 400;
  const double lo = 0.5 * min_re;
  const double hi = 2.0 * max_abs + min_re;
  for (int i = 0; i <= grid; ++i) centers.push_back(lo + (hi - lo) * i / grid);
  double max_re = min_re;
  for (const cplx& z : spec.eigenvalues) {
    centers.push_back(z.real());
    max_re = std::max(max_re, z.real());
  }
  centers.push_back(0.5 * (min_re + max_re));

  for (const double inner : {0.75, 0.9}) {
    bool found = false;
    ContourSpec best{0.0, 0.0, nodes};
    double best_cost = 2.0;
    for (const double c : centers) {
      double d = 0.0;
      for (const cplx& z : spec.eigenvalues) d = std::max(d, std::abs(z - c));
      const double r_min = std::max(d / inner, 0.05 * c);
      const double r_max = std::min(c - 0.5 * min_re, c * (1.0 - 1e-12));
      if (r_min > r_max * (1.0 + 1e-12)) continue;
      const double r = std::clamp(std::sqrt(d * c), r_min, std::max(r_min, r_max));
      const double cost = std::max(d / r, r / c);
      if (cost < best_cost) {
        best_cost = cost;
        best = {c, r, nodes};
        found = true;
      }
    }
    if (found) return best;
  }
  throw Error(ErrorCode::CannotEnclose,
              "no circle encloses the spectrum with margin while staying in the right half-plane");
}

PolarResult polar_decompose(const Mat& T, const KreinSpace& ell2, const KreinSpace& space) {
  if (T.rows() != space.dim() || T.cols() != ell2.dim())
    throw Error(ErrorCode::DimensionMismatch, "operator size does not match its spaces");
  const Mat Tplus = krein_adjoint(T, ell2, space);
  const Mat S = T * Tplus;
  PolarResult r;
  r.P = principal_sqrt_triangular(S, space).P;
  r.U = r.P.partialPivLu().solve(T);
  const Mat Uplus = krein_adjoint(r.U, ell2, space);
  const auto n = space.dim();
  const auto N = ell2.dim();
  r.coisometry_residual = linalg::norm2(r.U * Uplus - Mat::Identity(n, n));
  r.reassembly_residual = linalg::norm2(T - r.P * r.U) / std::max(linalg::norm2(T), 1e-300);

  const Mat kernel = linalg::null_space(T, 1e-10);
  const Subspace ker(ell2, kernel);
  r.initial_space = orthogonal_companion(ker);
  if (classify_subspace(r.initial_space).degenerate)
    throw Error(ErrorCode::NonRegularKernel, "N(T)^[perp] is not a regular subspace");

  const Mat& E = r.initial_projection = Uplus * r.U;
  const Mat JE = ell2.J() * E;
  double res = linalg::norm2(E * E - E);
  res = std::max(res, linalg::norm2(JE - JE.adjoint()));
  res = std::max(res, linalg::subspace_gap(linalg::column_space(E, 1e-8), r.initial_space.basis()));
  if (r.initial_space.dim() == N) res = std::max(res, linalg::norm2(E - Mat::Identity(N, N)));
  r.projection_residual = res;
  return r;
}

PolarResult polar_decompose(const Frame& F) {
  return polar_decompose(F.synthesis(), F.ell2(), F.space());
}

FrameLink connect_two_frames(const Mat& T1, const KreinSpace& ell1, const Mat& T2,
                             const KreinSpace& ell2, const KreinSpace& space) {
  const Mat S1 = T1 * krein_adjoint(T1, ell1, space);
  const Mat S2 = T2 * krein_adjoint(T2, ell2, space);
  if (linalg::norm2(S1 - S2) > 1e-10 * linalg::norm2(S1))
    throw Error(ErrorCode::OperatorMismatch, "the two families have different frame operators");
  const PolarResult pol1 = polar_decompose(T1, ell1, space);
  const PolarResult pol2 = polar_decompose(T2, ell2, space);

  FrameLink link;
  link.W = krein_adjoint(pol1.U, ell1, space) * pol2.U;
  const Mat Wplus = krein_adjoint(link.W, ell2, ell1);
  link.reassembly_residual = linalg::norm2(T2 - T1 * link.W) / std::max(linalg::norm2(T2), 1e-300);
  link.partial_isometry_residual = linalg::norm2(link.W * Wplus * link.W - link.W);
  link.final_projection_residual = linalg::norm2(link.W * Wplus - pol1.initial_projection);
  link.initial_projection_residual = linalg::norm2(Wplus * link.W - pol2.initial_projection);
  return link;
}

FrameLink connect_two_frames(const Frame& F1, const Frame& F2) {
  if (!(F1.space() == F2.space()))
    throw Error(ErrorCode::DimensionMismatch, "frames live in different spaces");
  return connect_two_frames(F1.synthesis(), F1.ell2(), F2.synthesis(), F2.ell2(), F1.space());
}

Mat j_unitary_from_generator(const Mat& G, const KreinSpace& signature) {
  if (G.rows() != G.cols() || G.rows() != signature.dim())
    throw Error(ErrorCode::DimensionMismatch, "generator size does not match the signature");
  const Mat JG = signature.J() * G;
  if (linalg::norm2(JG + JG.adjoint()) > 1e-12 * std::max(1.0, linalg::norm2(G)))
    throw Error(ErrorCode::InvalidArgument, "generator is not J-skew-Hermitian");
  return G.exp();
}

Mat random_j_unitary(const KreinSpace& signature, std::mt19937_64& rng, double scale) {
  const auto n = signature.dim();
  std::normal_distribution<double> g(0.0, scale);
  Mat Z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) Z(i, j) = cplx(g(rng), g(rng));
  const Mat X = 0.5 * (Z - Z.adjoint());
  return j_unitary_from_generator(signature.J() * X, signature);
}

Mat random_j_unitary(const KreinSpace& signature, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  return random_j_unitary(signature, rng, scale);
}

double j_unitarity_residual(const Mat& V, const KreinSpace& signature) {
  const auto n = signature.dim();
  return linalg::norm2(krein_adjoint(V, signature, signature) * V - Mat::Identity(n, n));
}

SynthesisResult synthesize_from_operator(const Mat& S, const KreinSpace& space, int n_plus,
                                         int n_minus, std::uint64_t seed, double mixing_scale) {
  require_square(S, space);
  if (n_plus < space.p() || n_minus < space.q())
    throw Error(ErrorCode::InvalidArgument, "frame sizes must be at least (p, q)");
  const int p = space.p();
  const int q = space.q();
  const int n = space.dim();
  const int N = n_plus + n_minus;

  SynthesisResult out;
  out.ell2 = KreinSpace(n_plus, n_minus);
  const Mat P = principal_sqrt_triangular(S, space).P;

  // isometric embedding of H: positive axes first, negative axes after the n_plus block
  Mat E = Mat::Zero(N, n);
  for (int k = 0; k < p; ++k) E(k, k) = 1.0;
  for (int k = 0; k < q; ++k) E(n_plus + k, p + k) = 1.0;
  const Mat embed = E * space.to_canonical().adjoint();
  Mat U = krein_adjoint(embed, space, out.ell2);

  std::mt19937_64 rng(seed);
  if (mixing_scale > 0.0) {
    const Mat VH = random_j_unitary(space, rng, mixing_scale);
    const Mat Vl = random_j_unitary(out.ell2, rng, mixing_scale);
    U = VH * U * Vl;
  }
  out.synthesis = P * U;
  const Mat TT = out.synthesis * krein_adjoint(out.synthesis, out.ell2, space);
  out.operator_residual = linalg::norm2(TT - S) / std::max(linalg::norm2(S), 1e-300);

  std::ostringstream diag;
  bool vanished = false;
  for (int i = 0; i < N; ++i) {
    const Vec f = out.synthesis.col(i);
    const double self = space.inner(f, f).real();
    const bool positive = self >= 0.0;
    (positive ? out.realized_plus : out.realized_minus) += 1;
    if (positive != (i < n_plus)) out.mismatched.push_back(i);
    if (f.norm() == 0.0) vanished = true;
  }
  out.sign_mismatch = !out.mismatched.empty();
  if (out.sign_mismatch) {
    diag << "prescribed signs (" << n_plus << ", " << n_minus << "), realized ("
         << out.realized_plus << ", " << out.realized_minus << "); mismatched coefficients:";
    for (int i : out.mismatched) diag << ' ' << (i + 1);
  }
  if (!vanished) {
    out.frame = build_frame(space, out.synthesis);
    out.is_jframe = is_jframe(*out.frame).is_jframe;
    if (!out.is_jframe) diag << (out.sign_mismatch ? "; " : "") << "family is not a J-frame";
  } else {
    diag << (out.sign_mismatch ? "; " : "") << "a synthesized vector vanished";
  }
  out.diagnostics = diag.str();
  return out;
}

}  // namespace kf
