#include "kreinframes/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kf {

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kPairingTol = 1e-8;

std::pair<double, double> extremes(const Mat& m) {
  const RVec ev = linalg::hermitian_eigenvalues(m);
  return {ev(0), ev(ev.size() - 1)};
}

// Single-linkage clusters of nearby eigenvalues, replaced by their means.
std::vector<cplx> merge_clusters(const std::vector<cplx>& raw) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = 1.0 + std::max(std::abs(raw[i]), std::abs(raw[j]));
      if (std::abs(raw[i] - raw[j]) <= kClusterTol * scale) parent[find(i)] = find(j);
    }
  std::vector<cplx> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += raw[i];
    ++count[find(i)];
  }
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sum[find(i)] / static_cast<double>(count[find(i)]);
  return out;
}

bool conjugate_closed(const std::vector<cplx>& ev) {
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    const cplx target = std::conj(ev[i]);
    const double tol = kPairingTol * (1.0 + std::abs(ev[i]));
    if (std::abs(ev[i].imag()) <= tol) {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < ev.size() && !found; ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(ev[j] - target) <= tol) {
        used[i] = used[j] = found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

SpectrumData spectrum(const Mat& S, const Tolerances& tol, const Mat* J) {
  if (S.rows() != S.cols()) throw Error(ErrorCode::DimensionMismatch, "spectrum needs a square matrix");
  SpectrumData out;
  if (S.size() == 0) return out;
  Eigen::ComplexEigenSolver<Mat> es(S, false);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::EigenSolverFailure, "eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  out.raw.assign(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.raw.begin(), out.raw.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  out.eigenvalues = merge_clusters(out.raw);
  out.real_part_min = out.eigenvalues.front().real();
  for (const cplx& z : out.eigenvalues) {
    out.is_real.push_back(std::abs(z.imag()) <= tol.real * (1.0 + std::abs(z)));
    out.real_part_min = std::min(out.real_part_min, z.real());
  }
  if (J != nullptr) out.conjugate_symmetric = conjugate_closed(out.eigenvalues);
  return out;
}

Mat schur_complement_2(const BlockRepCork& rep, cplx lambda) {
  const auto p = rep.A.rows();
  const RVec a = linalg::hermitian_eigenvalues(rep.A);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (std::abs(lambda - a(i)) <= 1e-12 * std::max(1.0, std::abs(a(i))))
      throw Error(ErrorCode::LambdaInSpectrum, "lambda lies in the spectrum of A");
  const Mat AK = rep.A * rep.K;
  const Mat shifted = rep.A - lambda * Mat::Identity(p, p);
  const auto q = rep.D.rows();
  return rep.D - lambda * Mat::Identity(q, q) + AK.adjoint() * shifted.partialPivLu().solve(AK);
}

Mat schur_complement_1(const BlockRepEdinburgh& rep, cplx lambda) {
  const auto q = rep.Dprime.rows();
  const RVec d = linalg::hermitian_eigenvalues(rep.Dprime);
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (std::abs(lambda - d(i)) <= 1e-12 * std::max(1.0, std::abs(d(i))))
      throw Error(ErrorCode::LambdaInSpectrum, "lambda lies in the spectrum of D'");
  const Mat LD = rep.L * rep.Dprime;
  const Mat shifted = rep.Dprime - lambda * Mat::Identity(q, q);
  const auto p = rep.Aprime.rows();
  return rep.Aprime - lambda * Mat::Identity(p, p) + LD * shifted.partialPivLu().solve(LD.adjoint());
}

double relative_singularity(const Mat& m, double scale) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const RVec& sv = svd.singularValues();
  return sv(sv.size() - 1) / scale;
}

std::string to_string(EnclosureSource s) {
  switch (s) {
    case EnclosureSource::Cork: return "Cork";
    case EnclosureSource::Edinburgh: return "Edinburgh";
    case EnclosureSource::FrameBounds: return "FrameBounds";
    case EnclosureSource::ImaginaryStrip: return "ImaginaryStrip";
  }
  return "Unknown";
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::BoundaryContact: return "boundary-contact";
    case Membership::Outside: return "outside";
  }
  return "unknown";
}

EnclosureRegion enclosure_cork(const BlockRepCork& rep) {
  const auto [a_lo, a_hi] = extremes(rep.A);
  const auto [d_lo, d_hi] = extremes(rep.D);
  const auto [b_lo, b_hi] = extremes(rep.DplusKAK);
  EnclosureRegion r;
  r.source = EnclosureSource::Cork;
  r.disks.push_back({a_hi, a_hi, true});
  r.halfplane_re_gt = b_lo / 2.0;
  r.imag_abs_max = linalg::norm2(rep.A * rep.K);
  r.real_interval = std::make_pair(std::min(a_lo, b_lo), std::max(a_hi, d_hi));
  r.parameters = {{"a_minus", a_lo}, {"a_plus", a_hi}, {"d_minus", d_lo}, {"d_plus", d_hi},
                  {"b_minus", b_lo}, {"b_plus", b_hi}, {"norm_AK", *r.imag_abs_max}};
  return r;
}

EnclosureRegion enclosure_edinburgh(const BlockRepEdinburgh& rep) {
  const auto [a_lo, a_hi] = extremes(rep.Aprime);
  const auto [d_lo, d_hi] = extremes(rep.Dprime);
  const auto [b_lo, b_hi] = extremes(rep.AplusLDL);
  EnclosureRegion r;
  r.source = EnclosureSource::Edinburgh;
  r.disks.push_back({d_hi, d_hi, true});
  r.halfplane_re_gt = b_lo / 2.0;
  r.imag_abs_max = linalg::norm2(rep.L * rep.Dprime);
  r.real_interval = std::make_pair(std::min(d_lo, b_lo), std::max(a_hi, d_hi));
  r.parameters = {{"a_prime_minus", a_lo}, {"a_prime_plus", a_hi}, {"d_prime_minus", d_lo},
                  {"d_prime_plus", d_hi},  {"b_prime_minus", b_lo}, {"b_prime_plus", b_hi},
                  {"norm_LDprime", *r.imag_abs_max}};
  return r;
}

EnclosureRegion enclosure_imag_bound(const BlockRepCork& rep_c, const BlockRepEdinburgh& rep_e) {
  const double ak = linalg::norm2(rep_c.A * rep_c.K);
  const double ld = linalg::norm2(rep_e.L * rep_e.Dprime);
  EnclosureRegion r;
  r.source = EnclosureSource::ImaginaryStrip;
  r.imag_abs_max = std::min(ak, ld);
  r.parameters = {{"norm_AK", ak}, {"norm_LDprime", ld}};
  return r;
}

EnclosureRegion enclosure_from_bounds(const JFrameBounds& b) {
  const double eps_minus = std::max(std::min(1.0 / b.delta_plus, b.alpha_minus),
                                    std::min(1.0 / b.delta_minus, b.alpha_plus));
  const double eps_plus = std::min(std::max(1.0 / b.gamma_plus, b.beta_minus),
                                   std::max(1.0 / b.gamma_minus, b.beta_plus));
  const double alpha = std::max(b.alpha_plus, b.alpha_minus);
  const double gamma = std::max(b.gamma_plus, b.gamma_minus);
  EnclosureRegion r;
  r.source = EnclosureSource::FrameBounds;
  r.disks.push_back({1.0 / gamma, 1.0 / gamma, true});
  r.halfplane_re_gt = alpha / 2.0;
  r.real_interval = std::make_pair(eps_minus, eps_plus);
  r.parameters = {{"eps_minus", eps_minus},      {"eps_plus", eps_plus},
                  {"alpha", alpha},              {"gamma", gamma},
                  {"alpha_plus", b.alpha_plus},  {"alpha_minus", b.alpha_minus},
                  {"gamma_plus", b.gamma_plus},  {"gamma_minus", b.gamma_minus}};
  return r;
}

std::optional<std::pair<double, double>> intersect(std::pair<double, double> a,
                                                   std::pair<double, double> b) {
  const double lo = std::max(a.first, b.first);
  const double hi = std::min(a.second, b.second);
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

MembershipReport check_membership(const SpectrumData& spec, const EnclosureRegion& region,
                                  const Tolerances& tol) {
  MembershipReport rep;
  rep.source = region.source;
  rep.slack = tol.enclosure;
  auto worst = [](Membership a, Membership b) { return std::max(a, b); };
  // strict: value must exceed bound (open set); closed: value may equal it
  auto grade = [](double margin, double slack, bool strict) {
    if (strict ? margin > slack : margin >= 0.0) return Membership::Inside;
    if (margin >= -slack) return Membership::BoundaryContact;
    return Membership::Outside;
  };

  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const cplx z = spec.eigenvalues[i];
    const double slack = tol.enclosure * (1.0 + std::abs(z));
    Membership m = Membership::Inside;
    if (spec.is_real[i]) {
      if (region.real_interval) {
        const auto [lo, hi] = *region.real_interval;
        m = grade(std::min(z.real() - lo, hi - z.real()), slack, false);
      }
    } else {
      for (const Disk& d : region.disks)
        m = worst(m, grade(d.radius - std::abs(z - d.center), slack, d.open));
      if (region.halfplane_re_gt)
        m = worst(m, grade(z.real() - *region.halfplane_re_gt, slack, true));
      if (region.imag_abs_max)
        m = worst(m, grade(*region.imag_abs_max - std::abs(z.imag()), slack, false));
    }
    rep.verdicts.push_back(m);
    if (m == Membership::Outside) rep.all_contained = false;
  }
  return rep;
}

}  // namespace kf
