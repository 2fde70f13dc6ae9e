#include "kreinframes/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace kf {

namespace {

bool same(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool evaluate(double value, double tol, const std::string& relation) {
  if (relation == "<=") return value <= tol;
  if (relation == "<") return value < tol;
  if (relation == ">") return value > tol;
  if (relation == ">=") return value >= tol;
  return value == tol;
}

class CheckList {
 public:
  explicit CheckList(std::vector<Check>& out) : out_(out) {}

  void add(std::string name, double value, double tol, std::string relation = "<=",
           bool gating = true, std::string note = {}) {
    Check c{std::move(name), value, tol, std::move(relation), false, gating, std::move(note)};
    c.pass = std::isfinite(value) && evaluate(value, tol, c.relation);
    if (!std::isfinite(c.value)) c.value = 0.0;
    out_.push_back(std::move(c));
  }

  void flag(std::string name, bool ok, std::string note = {}) {
    add(std::move(name), ok ? 1.0 : 0.0, 1.0, "==", true, std::move(note));
  }

  // Runs a stage; a thrown library error becomes a failing check.
  bool stage(const std::string& name, const std::function<void()>& body, bool gating = true) {
    try {
      body();
      return true;
    } catch (const Error& e) {
      add("stage:" + name, 0.0, 1.0, "==", gating,
          std::string(to_string(e.code())) + ": " + e.what());
      return false;
    }
  }

 private:
  std::vector<Check>& out_;
};

double rel(const Mat& got, const Mat& want, double ref) {
  return linalg::norm2(got - want) / std::max(ref, 1e-300);
}

}  // namespace

bool AnalysisReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass || !c.gating; });
}

bool operator==(const RegionReport& a, const RegionReport& b) {
  const EnclosureRegion& x = a.region;
  const EnclosureRegion& y = b.region;
  if (x.source != y.source || x.disks.size() != y.disks.size()) return false;
  for (std::size_t i = 0; i < x.disks.size(); ++i)
    if (x.disks[i].center != y.disks[i].center || x.disks[i].radius != y.disks[i].radius ||
        x.disks[i].open != y.disks[i].open)
      return false;
  return x.halfplane_re_gt == y.halfplane_re_gt && x.imag_abs_max == y.imag_abs_max &&
         x.real_interval == y.real_interval && x.parameters == y.parameters &&
         a.verdicts == b.verdicts && a.all_contained == b.all_contained;
}

bool operator==(const JFrameDetails& a, const JFrameDetails& b) {
  const JFrameBounds& x = a.bounds;
  const JFrameBounds& y = b.bounds;
  const bool bounds_equal =
      x.alpha_plus == y.alpha_plus && x.beta_plus == y.beta_plus && x.alpha_minus == y.alpha_minus &&
      x.beta_minus == y.beta_minus && x.gamma_plus == y.gamma_plus && x.delta_plus == y.delta_plus &&
      x.gamma_minus == y.gamma_minus && x.delta_minus == y.delta_minus &&
      x.oracle_mismatch == y.oracle_mismatch;
  return bounds_equal && same(a.S, b.S) && same(a.S_plus, b.S_plus) && same(a.S_minus, b.S_minus) &&
         same(a.Q, b.Q) && same(a.A, b.A) && same(a.K, b.K) && same(a.D, b.D) &&
         same(a.DplusKAK, b.DplusKAK) && same(a.Z, b.Z) && same(a.Aprime, b.Aprime) &&
         same(a.L, b.L) && same(a.Dprime, b.Dprime) && same(a.AplusLDL, b.AplusLDL) &&
         same(a.Y, b.Y) && a.spectrum == b.spectrum && a.spectrum_is_real == b.spectrum_is_real &&
         a.regions == b.regions && same(a.P, b.P) && same(a.U, b.U) &&
         a.contour.center == b.contour.center && a.contour.radius == b.contour.radius &&
         a.contour.nodes == b.contour.nodes &&
         a.sqrt_residual_triangular == b.sqrt_residual_triangular &&
         a.sqrt_residual_contour == b.sqrt_residual_contour &&
         a.sqrt_agreement == b.sqrt_agreement && a.coisometry_residual == b.coisometry_residual &&
         a.reconstruction_residual == b.reconstruction_residual;
}

bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
  return a.p == b.p && a.q == b.q && a.n_vectors == b.n_vectors &&
         a.plus_indices == b.plus_indices && a.minus_indices == b.minus_indices &&
         a.is_jframe == b.is_jframe && a.reasons == b.reasons && a.details == b.details &&
         a.checks == b.checks && a.exit_code == b.exit_code;
}

void set_tolerance(Tolerances& tol, const std::string& name, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::InvalidArgument, "tolerance " + name + " must be positive");
  if (name == "rank") tol.rank = value;
  else if (name == "pd") tol.pd = value;
  else if (name == "contract") tol.contract = value;
  else if (name == "subspace_angle") tol.subspace_angle = value;
  else if (name == "real") tol.real = value;
  else if (name == "enclosure") tol.enclosure = value;
  else throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
}

EnclosureSet enclosures(const Frame& F, const Tolerances& tol) {
  const JFrameOperatorBundle bundle = jframe_operator(F, tol);
  const BlockRepCork cork = block_rep_cork(bundle, tol);
  const BlockRepEdinburgh edin = block_rep_edinburgh(bundle, tol);
  const JFrameBounds bounds = jframe_bounds(cork, edin, F, tol);
  EnclosureSet set;
  set.spectrum = spectrum(bundle.S, tol, &F.space().J());
  set.regions = {enclosure_cork(cork), enclosure_edinburgh(edin), enclosure_imag_bound(cork, edin),
                 enclosure_from_bounds(bounds)};
  return set;
}

AnalysisReport analyze(const Frame& F, const Tolerances& tol) {
  AnalysisReport r;
  r.p = F.space().p();
  r.q = F.space().q();
  r.n_vectors = F.size();
  for (int i : F.plus_indices()) r.plus_indices.push_back(i + 1);
  for (int i : F.minus_indices()) r.minus_indices.push_back(i + 1);

  const JFrameReport jr = is_jframe(F, tol);
  r.is_jframe = jr.is_jframe;
  r.reasons = jr.failure_reasons;
  if (!r.is_jframe) {
    r.exit_code = 2;
    return r;
  }

  CheckList checks(r.checks);
  JFrameDetails d;
  const KreinSpace& H = F.space();
  const Mat& J = H.J();

  std::optional<JFrameOperatorBundle> bundle;
  if (!checks.stage("frame-operator", [&] { bundle = jframe_operator(F, tol); })) {
    r.exit_code = 3;
    return r;
  }
  d.S = bundle->S;
  d.S_plus = bundle->S_plus;
  d.S_minus = bundle->S_minus;
  d.Q = bundle->Q;
  const double s_norm = linalg::norm2(d.S);
  const Mat JS = J * d.S;
  checks.add("frame-operator-split", rel(d.S_plus - d.S_minus, d.S, s_norm), 1e-12);
  checks.add("frame-operator-projection", rel(d.Q * d.S, d.S_plus, s_norm), 1e-12);
  checks.add("frame-operator-selfadjoint", linalg::norm2(JS - JS.adjoint()) / s_norm, 1e-12);
  checks.flag("jframe-by-frame-inequalities", jframe_by_frame_inequalities(F, tol));

  std::optional<BlockRepCork> cork;
  std::optional<BlockRepEdinburgh> edin;
  const bool reps_ok = checks.stage("block-representations", [&] {
    cork = block_rep_cork(*bundle, tol);
    edin = block_rep_edinburgh(*bundle, tol);
  });
  if (reps_ok) {
    d.A = cork->A;
    d.K = cork->K;
    d.D = cork->D;
    d.DplusKAK = cork->DplusKAK;
    d.Aprime = edin->Aprime;
    d.L = edin->L;
    d.Dprime = edin->Dprime;
    d.AplusLDL = edin->AplusLDL;
    checks.add("cork-angular-norm", linalg::norm2(d.K), 1.0, "<");
    checks.add("edinburgh-angular-norm", linalg::norm2(d.L), 1.0, "<");
    checks.add("cork-angular-consistency", cork->angular_mismatch, 1e-8);
    checks.add("edinburgh-angular-consistency", edin->angular_mismatch, 1e-8);
    checks.add("cork-A-positive", linalg::hermitian_eigenvalues(d.A)(0), 0.0, ">");
    checks.add("cork-D-plus-KAK-positive", linalg::hermitian_eigenvalues(d.DplusKAK)(0), 0.0, ">");
    checks.add("edinburgh-Dprime-positive", linalg::hermitian_eigenvalues(d.Dprime)(0), 0.0, ">");
    checks.add("edinburgh-A-plus-LDL-positive", linalg::hermitian_eigenvalues(d.AplusLDL)(0), 0.0, ">");

    const SpmReport spm = s_pm_block_reps(*cork, *edin, *bundle);
    checks.add("cork-reassembly", spm.cork_reassembly_error, 1e-10);
    checks.add("edinburgh-reassembly", spm.edinburgh_reassembly_error, 1e-10);
    checks.add("cork-S-plus-form", spm.cork_plus_error, 1e-10);
    checks.add("cork-S-minus-form", spm.cork_minus_error, 1e-10);
    checks.add("edinburgh-S-plus-form", spm.edinburgh_plus_error, 1e-10);
    checks.add("edinburgh-S-minus-form", spm.edinburgh_minus_error, 1e-10);

    checks.stage("inverse-forms", [&] {
      const InverseBlockReps inv = inverse_block_reps(*cork, *edin, d.S);
      d.Z = inv.Z;
      d.Y = inv.Y;
      checks.add("cork-inverse-form", inv.cork_error, 1e-10);
      checks.add("edinburgh-inverse-form", inv.edinburgh_error, 1e-10);
      checks.add("inverse-duality", std::max(inv.duality_error, inv.duality_error_edinburgh), 1e-9);
    });

    const bool bounds_ok = checks.stage("bounds", [&] {
      d.bounds = jframe_bounds(*cork, *edin, F, tol);
      checks.add("bounds-oracle", d.bounds.oracle_mismatch, 1e-8);
    });

    checks.stage("spectrum", [&] {
      const SpectrumData spec = spectrum(d.S, tol, &J);
      d.spectrum = spec.eigenvalues;
      d.spectrum_is_real = spec.is_real;
      checks.add("spectrum-right-half-plane", spec.real_part_min, 0.0, ">");
      checks.flag("spectrum-conjugate-symmetric", spec.conjugate_symmetric.value_or(false));
      std::vector<EnclosureRegion> regions{enclosure_cork(*cork), enclosure_edinburgh(*edin),
                                           enclosure_imag_bound(*cork, *edin)};
      if (bounds_ok) regions.push_back(enclosure_from_bounds(d.bounds));
      for (EnclosureRegion& region : regions) {
        const MembershipReport m = check_membership(spec, region, tol);
        const auto outside = std::count(m.verdicts.begin(), m.verdicts.end(), Membership::Outside);
        checks.add("enclosure-" + to_string(region.source), static_cast<double>(outside), 0.0, "==");
        d.regions.push_back({std::move(region), m.verdicts, m.all_contained});
      }
    });
  }

  checks.stage("square-root", [&] {
    const SqrtResult tri = principal_sqrt_triangular(d.S, H);
    d.P = tri.P;
    d.sqrt_residual_triangular = tri.residual;
    checks.add("sqrt-residual", tri.residual, 1e-9);
    checks.flag("sqrt-sector", tri.sector_ok);
    checks.add("sqrt-krein-selfadjoint", tri.krein_selfadjoint_residual, 1e-9);
    const double p_norm = linalg::norm2(tri.P);
    checks.add("sqrt-commutes", linalg::norm2(tri.P * d.S - d.S * tri.P) / (s_norm * p_norm), 1e-12);
    const bool quad_ok = checks.stage("contour-square-root", [&] {
      d.contour = default_contour(spectrum(d.S, tol));
      const SqrtResult quad = riesz_dunford_sqrt(d.S, H, d.contour);
      d.sqrt_residual_contour = quad.residual;
      d.sqrt_agreement = linalg::norm2(quad.P - tri.P) / p_norm;
    }, false);
    if (quad_ok)
      checks.add("sqrt-contour-agreement", d.sqrt_agreement, 1e-8, "<=", false,
                 "quadrature accuracy depends on the spectral spread");
  });

  checks.stage("polar", [&] {
    const PolarResult pol = polar_decompose(F);
    d.U = pol.U;
    d.coisometry_residual = pol.coisometry_residual;
    checks.add("polar-coisometry", pol.coisometry_residual, 1e-10);
    checks.add("polar-reassembly", pol.reassembly_residual, 1e-10);
    checks.add("polar-initial-projection", pol.projection_residual, 1e-9);
  });

  checks.stage("reconstruction", [&] {
    d.reconstruction_residual = reconstruction_residual(F, *bundle, 50, 0x5eed);
    checks.add("reconstruction", d.reconstruction_residual, 1e-8);
  });

  checks.stage("dual-frame", [&] {
    const Frame dual = dual_frame(F, *bundle, tol);
    const Mat Sinv = d.S.partialPivLu().inverse();
    const Mat Td = dual.synthesis();
    const Mat Sd = Td * krein_adjoint(Td, dual.ell2(), H);
    checks.add("dual-operator", rel(Sd, Sinv, linalg::norm2(Sinv)), 1e-10);
    const double gap = std::max(
        linalg::subspace_gap(dual.synthesis_plus(), orthogonal_companion(bundle->m_minus, tol).basis()),
        linalg::subspace_gap(dual.synthesis_minus(), orthogonal_companion(bundle->m_plus, tol).basis()));
    checks.add("dual-spans", gap, 1e-8);
  });

  checks.stage("operator-conditions", [&] {
    const OperatorConditions oc =
        verify_operator_conditions(d.S, orthogonal_companion(bundle->m_minus, tol), H, tol);
    checks.flag("operator-conditions", oc.all());
  });

  r.details = std::move(d);
  r.exit_code = r.all_pass() ? 0 : 3;
  return r;
}

// ---- JSON ----

namespace {

std::string membership_name(Membership m) { return to_string(m); }

Membership membership_from(const std::string& s) {
  for (Membership m : {Membership::Inside, Membership::BoundaryContact, Membership::Outside})
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::Parse, "enclosures.verdicts: unknown verdict '" + s + "'");
}

EnclosureSource source_from(const std::string& s) {
  for (EnclosureSource e : {EnclosureSource::Cork, EnclosureSource::Edinburgh,
                            EnclosureSource::FrameBounds, EnclosureSource::ImaginaryStrip})
    if (to_string(e) == s) return e;
  throw Error(ErrorCode::Parse, "enclosures.source: unknown source '" + s + "'");
}

json region_json(const EnclosureRegion& g) {
  json disks = json::array();
  for (const Disk& k : g.disks) disks.push_back({{"center", k.center}, {"radius", k.radius}, {"open", k.open}});
  json j{{"source", to_string(g.source)}, {"disks", disks}, {"parameters", g.parameters}};
  j["halfplane_re_gt"] = g.halfplane_re_gt ? json(*g.halfplane_re_gt) : json(nullptr);
  j["imag_abs_max"] = g.imag_abs_max ? json(*g.imag_abs_max) : json(nullptr);
  j["real_interval"] = g.real_interval
                           ? json::array({g.real_interval->first, g.real_interval->second})
                           : json(nullptr);
  return j;
}

EnclosureRegion region_from(const json& j) {
  EnclosureRegion g;
  g.source = source_from(j.at("source").get<std::string>());
  for (const json& k : j.at("disks"))
    g.disks.push_back({k.at("center").get<double>(), k.at("radius").get<double>(), k.at("open").get<bool>()});
  g.parameters = j.at("parameters").get<std::map<std::string, double>>();
  if (!j.at("halfplane_re_gt").is_null()) g.halfplane_re_gt = j["halfplane_re_gt"].get<double>();
  if (!j.at("imag_abs_max").is_null()) g.imag_abs_max = j["imag_abs_max"].get<double>();
  if (!j.at("real_interval").is_null())
    g.real_interval = std::make_pair(j["real_interval"][0].get<double>(), j["real_interval"][1].get<double>());
  return g;
}

json complex_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const cplx& z : v) a.push_back(complex_to_json(z));
  return a;
}

Mat mat_at(const json& j, const char* key) { return matrix_from_json(j.at(key), key); }

}  // namespace

json regions_to_json(const EnclosureSet& set) {
  json regions = json::array();
  for (const EnclosureRegion& g : set.regions) regions.push_back(region_json(g));
  return json{{"spectrum", complex_list(set.spectrum.eigenvalues)}, {"regions", regions}};
}

json report_to_json(const AnalysisReport& r) {
  json j;
  j["space"] = {{"p", r.p}, {"q", r.q}};
  j["n_vectors"] = r.n_vectors;
  j["partition"] = {{"plus", r.plus_indices}, {"minus", r.minus_indices}};
  j["is_jframe"] = r.is_jframe;
  j["reasons"] = r.reasons;
  if (r.details) {
    const JFrameDetails& d = *r.details;
    j["operators"] = {{"S", matrix_to_json(d.S)},
                      {"S_plus", matrix_to_json(d.S_plus)},
                      {"S_minus", matrix_to_json(d.S_minus)},
                      {"Q", matrix_to_json(d.Q)}};
    j["cork"] = {{"A", matrix_to_json(d.A)},
                 {"K", matrix_to_json(d.K)},
                 {"D", matrix_to_json(d.D)},
                 {"D_plus_KAK", matrix_to_json(d.DplusKAK)},
                 {"Z", matrix_to_json(d.Z)}};
    j["edinburgh"] = {{"A_prime", matrix_to_json(d.Aprime)},
                      {"L", matrix_to_json(d.L)},
                      {"D_prime", matrix_to_json(d.Dprime)},
                      {"A_plus_LDL", matrix_to_json(d.AplusLDL)},
                      {"Y", matrix_to_json(d.Y)}};
    const JFrameBounds& b = d.bounds;
    j["bounds"] = {{"alpha_plus", b.alpha_plus},   {"beta_plus", b.beta_plus},
                   {"alpha_minus", b.alpha_minus}, {"beta_minus", b.beta_minus},
                   {"gamma_plus", b.gamma_plus},   {"delta_plus", b.delta_plus},
                   {"gamma_minus", b.gamma_minus}, {"delta_minus", b.delta_minus},
                   {"oracle_mismatch", b.oracle_mismatch}};
    j["spectrum"] = {{"eigenvalues", complex_list(d.spectrum)}, {"is_real", d.spectrum_is_real}};
    json regions = json::array();
    for (const RegionReport& g : d.regions) {
      json e = region_json(g.region);
      json verdicts = json::array();
      for (Membership m : g.verdicts) verdicts.push_back(membership_name(m));
      e["verdicts"] = verdicts;
      e["all_contained"] = g.all_contained;
      regions.push_back(std::move(e));
    }
    j["enclosures"] = regions;
    j["sqrt"] = {{"P", matrix_to_json(d.P)},
                 {"contour", {{"center", d.contour.center}, {"radius", d.contour.radius}, {"nodes", d.contour.nodes}}},
                 {"residual_triangular", d.sqrt_residual_triangular},
                 {"residual_contour", d.sqrt_residual_contour},
                 {"agreement", d.sqrt_agreement}};
    j["polar"] = {{"U", matrix_to_json(d.U)}, {"coisometry_residual", d.coisometry_residual}};
    j["reconstruction_residual"] = d.reconstruction_residual;
  }
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"relation", c.relation}, {"pass", c.pass}, {"gating", c.gating}, {"note", c.note}});
  j["checks"] = checks;
  j["exit_code"] = r.exit_code;
  return j;
}

AnalysisReport report_from_json(const json& j) {
  try {
    AnalysisReport r;
    r.p = j.at("space").at("p").get<int>();
    r.q = j.at("space").at("q").get<int>();
    r.n_vectors = j.at("n_vectors").get<int>();
    r.plus_indices = j.at("partition").at("plus").get<std::vector<int>>();
    r.minus_indices = j.at("partition").at("minus").get<std::vector<int>>();
    r.is_jframe = j.at("is_jframe").get<bool>();
    r.reasons = j.at("reasons").get<std::vector<std::string>>();
    if (j.contains("operators")) {
      JFrameDetails d;
      const json& ops = j["operators"];
      d.S = mat_at(ops, "S");
      d.S_plus = mat_at(ops, "S_plus");
      d.S_minus = mat_at(ops, "S_minus");
      d.Q = mat_at(ops, "Q");
      const json& c = j.at("cork");
      d.A = mat_at(c, "A");
      d.K = mat_at(c, "K");
      d.D = mat_at(c, "D");
      d.DplusKAK = mat_at(c, "D_plus_KAK");
      d.Z = mat_at(c, "Z");
      const json& e = j.at("edinburgh");
      d.Aprime = mat_at(e, "A_prime");
      d.L = mat_at(e, "L");
      d.Dprime = mat_at(e, "D_prime");
      d.AplusLDL = mat_at(e, "A_plus_LDL");
      d.Y = mat_at(e, "Y");
      const json& b = j.at("bounds");
      d.bounds = {b.at("alpha_plus").get<double>(),  b.at("beta_plus").get<double>(),
                  b.at("alpha_minus").get<double>(), b.at("beta_minus").get<double>(),
                  b.at("gamma_plus").get<double>(),  b.at("delta_plus").get<double>(),
                  b.at("gamma_minus").get<double>(), b.at("delta_minus").get<double>(),
                  b.at("oracle_mismatch").get<double>()};
      for (const json& z : j.at("spectrum").at("eigenvalues"))
        d.spectrum.push_back(complex_from_json(z, "spectrum.eigenvalues"));
      d.spectrum_is_real = j["spectrum"].at("is_real").get<std::vector<bool>>();
      for (const json& g : j.at("enclosures")) {
        RegionReport rr{region_from(g), {}, g.at("all_contained").get<bool>()};
        for (const json& v : g.at("verdicts")) rr.verdicts.push_back(membership_from(v.get<std::string>()));
        d.regions.push_back(std::move(rr));
      }
      const json& s = j.at("sqrt");
      d.P = mat_at(s, "P");
      d.contour = {s.at("contour").at("center").get<double>(), s["contour"].at("radius").get<double>(),
                   s["contour"].at("nodes").get<int>()};
      d.sqrt_residual_triangular = s.at("residual_triangular").get<double>();
      d.sqrt_residual_contour = s.at("residual_contour").get<double>();
      d.sqrt_agreement = s.at("agreement").get<double>();
      d.U = mat_at(j.at("polar"), "U");
      d.coisometry_residual = j["polar"].at("coisometry_residual").get<double>();
      d.reconstruction_residual = j.at("reconstruction_residual").get<double>();
      r.details = std::move(d);
    }
    for (const json& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                          c.at("tolerance").get<double>(), c.at("relation").get<std::string>(),
                          c.at("pass").get<bool>(), c.at("gating").get<bool>(),
                          c.at("note").get<std::string>()});
    r.exit_code = j.at("exit_code").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("report: ") + e.what());
  }
}

std::string emit_report(const AnalysisReport& r) { return report_to_json(r).dump(2) + "\n"; }

AnalysisReport parse_report(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("report: malformed JSON (") + e.what() + ")");
  }
}

}  // namespace kf
