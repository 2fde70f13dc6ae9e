#include "kreinframes/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "kreinframes/spectral.hpp"
#include "kreinframes/sqrtpolar.hpp"

namespace kf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel(const Mat& got, const Mat& want, double ref) {
  return linalg::norm2(got - want) / std::max(ref, 1e-300);
}

int count_outside(const SpectrumData& spec, const EnclosureRegion& g) {
  const MembershipReport m = check_membership(spec, g);
  return static_cast<int>(std::count(m.verdicts.begin(), m.verdicts.end(), Membership::Outside));
}

bool near_any(cplx z, const RVec& pts, double tol) {
  for (Eigen::Index i = 0; i < pts.size(); ++i)
    if (std::abs(z - pts(i)) <= tol) return true;
  return false;
}

void measure_schur(InstanceMetrics& m, const BlockRepCork& cork, const BlockRepEdinburgh& edin,
                   const SpectrumData& spec, double s_norm, std::mt19937_64& rng) {
  const RVec sa = linalg::hermitian_eigenvalues(cork.A);
  const RVec sd = linalg::hermitian_eigenvalues(edin.Dprime);
  double at = 0.0;
  for (const cplx& z : spec.eigenvalues) {
    if (!near_any(z, sa, 1e-8 * s_norm)) at = std::max(at, relative_singularity(schur_complement_2(cork, z), s_norm + std::abs(z)));
    if (!near_any(z, sd, 1e-8 * s_norm)) at = std::max(at, relative_singularity(schur_complement_1(edin, z), s_norm + std::abs(z)));
  }
  m.schur_at_spectrum = at;

  std::uniform_real_distribution<double> re(0.0, 2.0 * s_norm), im(-s_norm, s_norm);
  double off = std::numeric_limits<double>::infinity();
  int sampled = 0;
  while (sampled < 20) {
    const cplx z(re(rng), im(rng));
    bool close = near_any(z, sa, 1e-6 * s_norm) || near_any(z, sd, 1e-6 * s_norm);
    for (const cplx& w : spec.eigenvalues) close = close || std::abs(z - w) <= 1e-6 * (1.0 + s_norm);
    if (close) continue;
    ++sampled;
    off = std::min(off, relative_singularity(schur_complement_2(cork, z), s_norm + std::abs(z)));
    off = std::min(off, relative_singularity(schur_complement_1(edin, z), s_norm + std::abs(z)));
  }
  m.schur_off_spectrum = off;
}

}  // namespace

InstanceMetrics measure_instance(const GenConfig& cfg) {
  InstanceMetrics m;
  m.config = cfg;
  try {
    const Frame F = random_jframe(cfg);
    const KreinSpace& H = F.space();
    const Mat& J = H.J();
    m.generated_jframe = is_jframe(F).is_jframe;
    const Frame again = random_jframe(cfg);
    m.deterministic = (again.vectors().array() == F.vectors().array()).all();

    const JFrameOperatorBundle b = jframe_operator(F);
    const double s_norm = linalg::norm2(b.S);
    m.operator_split = rel(b.S_plus - b.S_minus, b.S, s_norm);

    const BlockRepCork cork = block_rep_cork(b);
    const BlockRepEdinburgh edin = block_rep_edinburgh(b);
    m.realized_angular_norm = linalg::norm2(cork.K);
    m.angular_norm_max = std::max(m.realized_angular_norm, linalg::norm2(edin.L));
    m.positivity_margin = std::min({linalg::hermitian_eigenvalues(cork.A)(0),
                                    linalg::hermitian_eigenvalues(cork.DplusKAK)(0),
                                    linalg::hermitian_eigenvalues(edin.Dprime)(0),
                                    linalg::hermitian_eigenvalues(edin.AplusLDL)(0)});
    const SpmReport spm = s_pm_block_reps(cork, edin, b);
    m.block_reassembly = std::max({spm.cork_reassembly_error, spm.edinburgh_reassembly_error,
                                   spm.cork_plus_error, spm.cork_minus_error,
                                   spm.edinburgh_plus_error, spm.edinburgh_minus_error});
    const InverseBlockReps inv = inverse_block_reps(cork, edin, b.S);
    // the larger of the errors measured against ||S^{-1}|| and against ||S||
    const double inv_err = std::max(inv.cork_error, inv.edinburgh_error);
    m.inverse_forms = std::max(inv_err, inv_err * linalg::norm2(inv.Sinv_direct) / s_norm);
    m.inverse_duality = std::max(inv.duality_error, inv.duality_error_edinburgh);
    const JFrameBounds bounds = jframe_bounds(cork, edin, F);
    m.bounds_oracle = bounds.oracle_mismatch;

    const SpectrumData spec = spectrum(b.S, {}, &J);
    m.min_real_part = spec.real_part_min;
    m.conjugate_symmetric = spec.conjugate_symmetric.value_or(false);
    m.outside_cork = count_outside(spec, enclosure_cork(cork));
    m.outside_edinburgh = count_outside(spec, enclosure_edinburgh(edin));
    m.outside_strip = count_outside(spec, enclosure_imag_bound(cork, edin));
    m.outside_bounds = count_outside(spec, enclosure_from_bounds(bounds));
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    measure_schur(m, cork, edin, spec, s_norm, rng);

    const SqrtResult tri = principal_sqrt_triangular(b.S, H);
    const double p_norm = linalg::norm2(tri.P);
    m.sqrt_residual = tri.residual;
    m.sqrt_sector = tri.sector_ok;
    m.sqrt_krein_selfadjoint = tri.krein_selfadjoint_residual;
    m.sqrt_commutes = linalg::norm2(tri.P * b.S - b.S * tri.P) / (s_norm * p_norm);
    const Mat Sinv = b.S.partialPivLu().inverse();
    const Mat Pinv = tri.P.partialPivLu().inverse();
    const SqrtResult inv_root = principal_sqrt_triangular(Sinv, H);
    m.sqrt_inverse_consistency = rel(inv_root.P, Pinv, linalg::norm2(Pinv));
    ContourSpec contour = default_contour(spec);
    const int nodes[3] = {16, 32, 64};
    for (int i = 0; i < 3; ++i) {
      contour.nodes = nodes[i];
      m.contour_errors[i] = rel(riesz_dunford_sqrt(b.S, H, contour).P, tri.P, p_norm);
    }
    m.contour_agreement = m.contour_errors[2];

    const PolarResult pol = polar_decompose(F);
    m.coisometry = pol.coisometry_residual;
    m.polar_reassembly = pol.reassembly_residual;
    m.polar_projection = pol.projection_residual;

    const Frame dual = dual_frame(F, b);
    m.dual_signs = true;
    for (int i = 0; i < F.size(); ++i) m.dual_signs = m.dual_signs && dual.sign_of(i) == F.sign_of(i);
    const Mat Td = dual.synthesis();
    m.dual_operator = rel(Td * krein_adjoint(Td, dual.ell2(), H), Sinv, linalg::norm2(Sinv));
    m.dual_spans = std::max(
        linalg::subspace_gap(dual.synthesis_plus(), orthogonal_companion(b.m_minus).basis()),
        linalg::subspace_gap(dual.synthesis_minus(), orthogonal_companion(b.m_plus).basis()));
    const PolarResult dual_pol = polar_decompose(dual);
    const double u_norm = linalg::norm2(pol.U);
    m.dual_polar = std::max(rel(dual_pol.U, pol.U, u_norm),
                            rel(Td, Pinv * pol.U, linalg::norm2(Td)));

    // same operator, coefficients mixed by a J-unitary of the coefficient space
    const Mat V = random_j_unitary(F.ell2(), rng);
    m.j_unitary = j_unitarity_residual(V, F.ell2());
    const Mat T = F.synthesis();
    const FrameLink square = connect_two_frames(T, F.ell2(), T * V, F.ell2(), H);
    const Mat EV = pol.initial_projection * V;
    m.link_unitary_recovery = rel(square.W, EV, linalg::norm2(EV));

    // a longer family with the same operator
    const SynthesisResult syn =
        synthesize_from_operator(b.S, H, F.n_plus() + 1, F.n_minus(), cfg.seed + 17);
    m.synthesis_roundtrip = syn.operator_residual;
    m.synthesis_sign_mismatch = syn.sign_mismatch;
    const FrameLink rect = connect_two_frames(T, F.ell2(), syn.synthesis, syn.ell2, H);
    m.link_partial_isometry = std::max(square.partial_isometry_residual, rect.partial_isometry_residual);
    m.link_reassembly = std::max(square.reassembly_residual, rect.reassembly_residual);
    m.link_projections = std::max({square.final_projection_residual, square.initial_projection_residual,
                                   rect.final_projection_residual, rect.initial_projection_residual});

    m.reconstruction = reconstruction_residual(F, b, 50, cfg.seed + 1);
    m.operator_conditions = verify_operator_conditions(b.S, orthogonal_companion(b.m_minus), H).all();
  } catch (const Error& e) {
    m.error = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    m.error = e.what();
  }
  return m;
}

std::vector<GenConfig> suite_instances(const SuiteConfig& cfg) {
  std::vector<GenConfig> out;
  for (const auto& [p, q] : cfg.sizes) {
    for (int s = 0; s < cfg.seeds; ++s) {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(s);
      std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(p * 31 + q));
      std::uniform_int_distribution<int> extra_plus(0, 2 * p), extra_minus(0, 2 * q);
      GenConfig g;
      g.p = p;
      g.q = q;
      g.n_plus = p + extra_plus(rng);
      g.n_minus = q + extra_minus(rng);
      g.angular_norm_cap = cfg.angular_norm_cap;
      g.conditioning_cap = cfg.conditioning_cap;
      g.seed = seed * 7919ULL + static_cast<std::uint64_t>(p * 101 + q);
      out.push_back(g);
    }
  }
  return out;
}

std::vector<InstanceMetrics> measure_all(const std::vector<GenConfig>& instances, int threads) {
  std::vector<InstanceMetrics> out(instances.size());
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, 64);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) out[i] = measure_instance(instances[i]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

constexpr int kMinRateSample = 20;

std::vector<PropertyResult> evaluate_properties(const std::vector<InstanceMetrics>& metrics,
                                                const std::map<std::string, double>& overrides) {
  struct Spec {
    const char* name;
    const char* relation;
    double tolerance;
    double (*value)(const InstanceMetrics&);
  };
  static const Spec specs[] = {
      {"generated-jframe", "==", 1.0, [](const InstanceMetrics& m) { return m.generated_jframe ? 1.0 : 0.0; }},
      {"generation-deterministic", "==", 1.0, [](const InstanceMetrics& m) { return m.deterministic ? 1.0 : 0.0; }},
      {"angular-knob-honest", "<=", 0.05,
       [](const InstanceMetrics& m) { return m.realized_angular_norm - m.config.angular_norm_cap; }},
      {"operator-split", "<=", 1e-12, [](const InstanceMetrics& m) { return m.operator_split; }},
      {"block-reassembly", "<=", 1e-10, [](const InstanceMetrics& m) { return m.block_reassembly; }},
      {"inverse-forms", "<=", 1e-10, [](const InstanceMetrics& m) { return m.inverse_forms; }},
      {"inverse-duality", "<=", 1e-9, [](const InstanceMetrics& m) { return m.inverse_duality; }},
      {"angular-contraction", "<", 1.0, [](const InstanceMetrics& m) { return m.angular_norm_max; }},
      {"positivity-certificates", ">", 0.0, [](const InstanceMetrics& m) { return m.positivity_margin; }},
      {"bounds-oracle", "<=", 1e-8, [](const InstanceMetrics& m) { return m.bounds_oracle; }},
      {"spectrum-right-half-plane", ">", 0.0, [](const InstanceMetrics& m) { return m.min_real_part; }},
      {"spectrum-conjugate-symmetric", "==", 1.0,
       [](const InstanceMetrics& m) { return m.conjugate_symmetric ? 1.0 : 0.0; }},
      {"enclosure-cork", "==", 0.0, [](const InstanceMetrics& m) { return double(m.outside_cork); }},
      {"enclosure-edinburgh", "==", 0.0, [](const InstanceMetrics& m) { return double(m.outside_edinburgh); }},
      {"enclosure-imaginary-strip", "==", 0.0, [](const InstanceMetrics& m) { return double(m.outside_strip); }},
      {"enclosure-frame-bounds", "==", 0.0, [](const InstanceMetrics& m) { return double(m.outside_bounds); }},
      {"schur-singular-on-spectrum", "<=", 1e-8, [](const InstanceMetrics& m) { return m.schur_at_spectrum; }},
      {"schur-regular-off-spectrum", ">", 1e-8, [](const InstanceMetrics& m) { return m.schur_off_spectrum; }},
      {"sqrt-residual", "<=", 1e-9, [](const InstanceMetrics& m) { return m.sqrt_residual; }},
      {"sqrt-sector", "==", 1.0, [](const InstanceMetrics& m) { return m.sqrt_sector ? 1.0 : 0.0; }},
      {"sqrt-krein-selfadjoint", "<=", 1e-9, [](const InstanceMetrics& m) { return m.sqrt_krein_selfadjoint; }},
      {"sqrt-commutes", "<=", 1e-12, [](const InstanceMetrics& m) { return m.sqrt_commutes; }},
      {"sqrt-of-inverse", "<=", 1e-9, [](const InstanceMetrics& m) { return m.sqrt_inverse_consistency; }},
      {"sqrt-contour-agreement", "<=", 1e-8, [](const InstanceMetrics& m) { return m.contour_agreement; }},
      {"polar-coisometry", "<=", 1e-10, [](const InstanceMetrics& m) { return m.coisometry; }},
      {"polar-reassembly", "<=", 1e-10, [](const InstanceMetrics& m) { return m.polar_reassembly; }},
      {"polar-initial-projection", "<=", 1e-9, [](const InstanceMetrics& m) { return m.polar_projection; }},
      {"dual-polar", "<=", 1e-9, [](const InstanceMetrics& m) { return m.dual_polar; }},
      {"j-unitary", "<=", 1e-10, [](const InstanceMetrics& m) { return m.j_unitary; }},
      {"link-partial-isometry", "<=", 1e-10, [](const InstanceMetrics& m) { return m.link_partial_isometry; }},
      {"link-reassembly", "<=", 1e-10, [](const InstanceMetrics& m) { return m.link_reassembly; }},
      {"link-projections", "<=", 1e-9, [](const InstanceMetrics& m) { return m.link_projections; }},
      {"link-recovers-unitary", "<=", 1e-9, [](const InstanceMetrics& m) { return m.link_unitary_recovery; }},
      {"synthesis-roundtrip", "<=", 1e-9, [](const InstanceMetrics& m) { return m.synthesis_roundtrip; }},
      {"reconstruction", "<=", 1e-8, [](const InstanceMetrics& m) { return m.reconstruction; }},
      {"dual-signs", "==", 1.0, [](const InstanceMetrics& m) { return m.dual_signs ? 1.0 : 0.0; }},
      {"dual-operator", "<=", 1e-10, [](const InstanceMetrics& m) { return m.dual_operator; }},
      {"dual-spans", "<=", 1e-8, [](const InstanceMetrics& m) { return m.dual_spans; }},
      {"operator-conditions", "==", 1.0,
       [](const InstanceMetrics& m) { return m.operator_conditions ? 1.0 : 0.0; }},
  };

  auto tolerance_for = [&](const std::string& name, double dflt) {
    auto it = overrides.find(name);
    return it == overrides.end() ? dflt : it->second;
  };
  auto holds = [](double v, double tol, const std::string& rel) {
    if (!std::isfinite(v)) return false;
    if (rel == "<=") return v <= tol;
    if (rel == "<") return v < tol;
    if (rel == ">") return v > tol;
    return v == tol;
  };
  auto worse = [](double a, double b, const std::string& rel) {
    if (!std::isfinite(b)) return b;
    if (!std::isfinite(a)) return a;
    if (rel == ">") return std::min(a, b);
    if (rel == "==") return a;
    return std::max(a, b);
  };

  for (const auto& [name, value] : overrides) {
    bool known = name == "instance-errors" || name == "contour-convergence-rate";
    for (const Spec& s : specs) known = known || name == s.name;
    if (!known) throw Error(ErrorCode::InvalidArgument, "unknown property '" + name + "'");
  }

  std::vector<PropertyResult> out;
  PropertyResult errors{"instance-errors", "==", tolerance_for("instance-errors", 0.0), 0.0, 0,
                        static_cast<int>(metrics.size())};
  for (const InstanceMetrics& m : metrics)
    if (!m.error.empty()) errors.worst += 1.0;
  errors.pass = errors.worst == errors.tolerance;
  errors.failures = static_cast<int>(errors.worst);
  out.push_back(errors);

  for (const Spec& s : specs) {
    PropertyResult r{s.name, s.relation, tolerance_for(s.name, s.tolerance)};
    bool first = true;
    for (const InstanceMetrics& m : metrics) {
      if (!m.error.empty()) continue;
      const double v = s.value(m);
      ++r.instances;
      if (!holds(v, r.tolerance, r.relation)) {
        ++r.failures;
        if (r.relation == "==") r.worst = v;
      }
      if (r.relation != "==") r.worst = first ? v : worse(r.worst, v, r.relation);
      else if (r.failures == 0) r.worst = v;
      first = false;
    }
    r.pass = r.failures == 0;
    out.push_back(r);
  }

  PropertyResult conv{"contour-convergence-rate", ">=", tolerance_for("contour-convergence-rate", 0.95)};
  PropertyResult mismatch{"synthesis-sign-mismatch-rate", "report", 0.0};
  mismatch.informational = true;
  int converging = 0, mismatches = 0, counted = 0;
  for (const InstanceMetrics& m : metrics) {
    if (!m.error.empty()) continue;
    ++counted;
    converging += m.contour_converges() ? 1 : 0;
    mismatches += m.synthesis_sign_mismatch ? 1 : 0;
  }
  conv.instances = mismatch.instances = counted;
  conv.worst = counted ? double(converging) / counted : 0.0;
  conv.failures = counted - converging;
  conv.pass = counted > 0 && conv.worst >= conv.tolerance;
  // below 20 instances a single rounding-floor instance moves the rate by more than 5%
  if (counted < kMinRateSample) {
    conv.informational = true;
    conv.pass = true;
  }
  mismatch.worst = counted ? double(mismatches) / counted : 0.0;
  mismatch.failures = mismatches;
  mismatch.pass = true;
  out.push_back(conv);
  out.push_back(mismatch);
  return out;
}

std::vector<PropertyResult> run_suite(const SuiteConfig& cfg) {
  return evaluate_properties(measure_all(suite_instances(cfg), cfg.threads), cfg.tolerance_overrides);
}

std::string format_table(const std::vector<PropertyResult>& props) {
  std::ostringstream o;
  o << std::left << std::setw(32) << "property" << std::setw(6) << "ok" << std::setw(14) << "worst"
    << std::setw(5) << "rel" << std::setw(12) << "tolerance" << "failures\n";
  for (const PropertyResult& r : props) {
    o << std::setw(32) << r.name << std::setw(6) << (r.informational ? "info" : r.pass ? "PASS" : "FAIL")
      << std::setw(14) << std::setprecision(4) << std::scientific << r.worst << std::setw(5) << r.relation
      << std::setw(12) << std::setprecision(2) << r.tolerance << std::defaultfloat << r.failures << "/"
      << r.instances << "\n";
  }
  return o.str();
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto plus = item.find('+');
    if (plus == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "sizes: expected p+q, got '" + item + "'");
    try {
      std::size_t used = 0;
      const int p = std::stoi(item.substr(0, plus), &used);
      const int q = std::stoi(item.substr(plus + 1));
      if (p < 1 || q < 1) throw std::invalid_argument("range");
      out.emplace_back(p, q);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "sizes: expected positive p+q, got '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "sizes: empty list");
  return out;
}

}  // namespace kf
