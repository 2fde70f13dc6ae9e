#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "kreinframes/analysis.hpp"
#include "kreinframes/verify.hpp"

using namespace kf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string data(const std::string& name) { return std::string(KF_TEST_DATA) + "/" + name; }
std::string work(const std::string& name) { return std::string(KF_WORK_DIR) + "/" + name; }

int run_cli(const std::string& args, std::string& output) {
  const std::string log = work("acceptance_cli.txt");
  const std::string cmd = std::string("\"") + KF_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  output = read_text_file(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Mat m1(double a) { return Mat::Constant(1, 1, a); }

struct Worst {
  double value = 0.0;
  int failures = 0;
  int count = 0;
  void add(double v, double tol) {
    ++count;
    if (!(v <= tol)) ++failures;
    if (std::isnan(v) || v > value) value = v;
  }
};

int g_failed = 0;

void verdict(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("criterion %d  %-40s %s  %s\n", id, title.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void criterion_re1() {
  const auto t0 = Clock::now();
  std::string out;
  const int code = run_cli("analyze \"" + data("re1.json") + "\" --report \"" + work("acceptance_re1.json") + "\"", out);
  const AnalysisReport r = parse_report(read_text_file(work("acceptance_re1.json")));
  const double elapsed = seconds_since(t0);

  double worst = 0.0;
  auto cmp = [&](const Mat& got, const Mat& want) {
    if (got.rows() != want.rows() || got.cols() != want.cols()) {
      worst = INFINITY;
      return;
    }
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  };
  auto num = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  bool complete = code == 0 && r.details.has_value();
  if (complete) {
    const JFrameDetails& d = *r.details;
    const double s2 = std::sqrt(2.0);
    cmp(d.S, m2(0, 2, -2, 4));
    cmp(d.Q, m2(1, -0.5, 0, 0));
    cmp(d.A, m1(4.0 / 3.0));
    cmp(d.K, m1(-0.5));
    cmp(d.D, m1(8.0 / 3.0));
    cmp(d.Aprime, m1(0.0));
    cmp(d.L, m1(0.5));
    cmp(d.Dprime, m1(4.0));
    const JFrameBounds& b = d.bounds;
    num(b.alpha_plus, 1);
    num(b.beta_plus, 1);
    num(b.alpha_minus, 3);
    num(b.beta_minus, 3);
    num(b.gamma_plus, 0.75);
    num(b.delta_plus, 0.75);
    num(b.gamma_minus, 0.25);
    num(b.delta_minus, 0.25);
    complete = d.spectrum.size() == 2;
    for (cplx z : d.spectrum) worst = std::max(worst, std::abs(z - 2.0));
    cmp(d.P, s2 * m2(0.5, 0.5, -0.5, 1.5));
    cmp(d.U, s2 * m2(0.75, 0.25, 0.25, 0.75));
  }
  const bool pass = complete && worst <= 1e-12 && elapsed < 1.0;
  verdict(1, "two-vector example end-to-end", pass,
          fmt("max abs error %.2e (tol 1e-12), exit %.0f, %.3f s (limit 1 s)", worst, code, elapsed));
}

void criteria_suite() {
  const SuiteConfig cfg;  // 200 seeds, sizes (1,1) (2,1) (3,2) (4,4)
  const auto t0 = Clock::now();
  const std::vector<InstanceMetrics> ms = measure_all(suite_instances(cfg), cfg.threads);
  const double elapsed = seconds_since(t0);

  int errors = 0;
  Worst rhp, encl, oracle, blocks, contract, positivity;
  Worst sq_res, sector, agree;
  Worst cois, polar, link_pi, link_re;
  Worst recon, dsign, dop, dspan;
  int converging = 0;
  std::string first_error;
  for (const InstanceMetrics& m : ms) {
    if (!m.error.empty()) {
      ++errors;
      if (first_error.empty()) first_error = m.error;
      continue;
    }
    rhp.add(m.min_real_part > 0.0 ? 0.0 : 1.0, 0.0);
    encl.add(m.outside_cork + m.outside_edinburgh + m.outside_strip + m.outside_bounds, 0.0);
    oracle.add(m.bounds_oracle, 1e-8);
    blocks.add(std::max(m.block_reassembly, m.inverse_forms), 1e-10);
    contract.add(m.angular_norm_max, 1.0 - 1e-10);
    positivity.add(m.positivity_margin > 0.0 ? 0.0 : 1.0, 0.0);
    sq_res.add(m.sqrt_residual, 1e-9);
    sector.add(m.sqrt_sector ? 0.0 : 1.0, 0.0);
    agree.add(m.contour_agreement, 1e-8);
    converging += m.contour_converges();
    cois.add(m.coisometry, 1e-10);
    polar.add(m.polar_reassembly, 1e-10);
    link_pi.add(m.link_partial_isometry, 1e-10);
    link_re.add(m.link_reassembly, 1e-10);
    recon.add(m.reconstruction, 1e-8);
    dsign.add(m.dual_signs ? 0.0 : 1.0, 0.0);
    dop.add(m.dual_operator, 1e-10);
    dspan.add(m.dual_spans, 1e-8);
  }
  const int n = static_cast<int>(ms.size());
  const std::string err_note = errors ? " first error: " + first_error : "";

  const bool c2 = errors == 0 && rhp.failures == 0 && encl.failures == 0 && oracle.failures == 0 &&
                  blocks.failures == 0 && contract.failures == 0 && positivity.failures == 0 && elapsed < 60.0;
  verdict(2, "randomized theorem suite", c2,
          fmt("%.0f instances, enclosure misses %.0f, oracle %.2e, reassembly %.2e", n, encl.value, oracle.value,
              blocks.value) +
              fmt(", max(|K|,|L|) %.3f, %.1f s (limit 60 s)", contract.value, elapsed) + err_note);

  const double rate = n ? static_cast<double>(converging) / n : 0.0;
  const bool c3 = errors == 0 && sq_res.failures == 0 && sector.failures == 0 && agree.failures == 0 && rate >= 0.95;
  verdict(3, "principal square root", c3,
          fmt("residual %.2e, sector misses %.0f, contour agreement %.2e, convergent %.1f%% (need 95%%)",
              sq_res.value, sector.value, agree.value, 100.0 * rate) + err_note);

  // synthesis round trip on 50 seeds, cycling through the sizes
  Worst syn;
  int mismatches = 0;
  for (int s = 0; s < 50; ++s) {
    GenConfig g;
    const auto [p, q] = cfg.sizes[static_cast<std::size_t>(s) % cfg.sizes.size()];
    g.p = p;
    g.q = q;
    g.n_plus = p + s % 3;
    g.n_minus = q + s % 2;
    g.angular_norm_cap = cfg.angular_norm_cap;
    g.conditioning_cap = cfg.conditioning_cap;
    g.seed = 1000 + static_cast<std::uint64_t>(s);
    const Frame F = random_jframe(g);
    const SynthesisResult r =
        synthesize_from_operator(jframe_operator(F).S, F.space(), g.n_plus, g.n_minus, g.seed);
    syn.add(r.operator_residual, 1e-9);
    mismatches += r.sign_mismatch;
  }
  const bool c4 = errors == 0 && cois.failures == 0 && polar.failures == 0 && link_pi.failures == 0 &&
                  link_re.failures == 0 && syn.failures == 0;
  verdict(4, "polar decomposition and co-isometries", c4,
          fmt("coisometry %.2e, T = PU %.2e, WW+W = W %.2e, T2 = T1W %.2e", cois.value, polar.value, link_pi.value,
              link_re.value) +
              fmt(", synthesis %.2e; sign-partition mismatches %.0f/50", syn.value, mismatches) + err_note);

  const bool c5 = errors == 0 && recon.failures == 0 && dsign.failures == 0 && dop.failures == 0 &&
                  dspan.failures == 0;
  verdict(5, "reconstruction and canonical dual", c5,
          fmt("reconstruction %.2e, sign flips %.0f, dual operator %.2e, span angles %.2e", recon.value,
              dsign.value, dop.value, dspan.value) + err_note);
}

void criterion_negative() {
  struct Fixture {
    const char* file;
    const char* reason;
  };
  const Fixture fixtures[] = {{"not_jframe_neutral.json", kReasonMinusNotMaximal},
                              {"not_jframe_no_negative.json", kReasonMinusNotMaximal}};
  bool pass = true;
  std::string detail;
  for (const Fixture& f : fixtures) {
    std::string out;
    const int code = run_cli("analyze \"" + data(f.file) + "\"", out);
    const bool ok = code == 2 && out.find(f.reason) != std::string::npos;
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += std::string(f.file) + ": exit " + std::to_string(code) + (ok ? " with reason" : " WRONG");
  }
  verdict(6, "non-J-frames rejected", pass, detail);
}

}  // namespace

int main() {
  try {
    criterion_re1();
    criteria_suite();
    criterion_negative();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s\n", g_failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return g_failed ? 1 : 0;
}
