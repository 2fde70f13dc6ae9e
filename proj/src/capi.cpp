#include "kreinframes.h"

#include <cstring>
#include <sstream>

#include "kreinframes/analysis.hpp"
#include "kreinframes/verify.hpp"

struct kf_frame {
  kf::FrameFile file;
};

struct kf_analysis {
  kf::AnalysisReport report;
};

namespace {

thread_local std::string g_last_error;

kf_status status_of(kf::ErrorCode code) {
  using kf::ErrorCode;
  switch (code) {
    case ErrorCode::Parse: return KF_E_PARSE;
    case ErrorCode::NotJFrame: return KF_E_NOT_JFRAME;
    case ErrorCode::SpectrumNotInRHP: return KF_E_SPECTRAL;
    case ErrorCode::GenerationExhausted: return KF_E_GENERATION;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyFamily:
    case ErrorCode::ZeroVector:
    case ErrorCode::SingularS: return KF_E_ARGUMENT;
    default: return KF_E_NUMERIC;
  }
}

template <class F>
kf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const kf::Error& e) {
    g_last_error = e.what();
    if (e.code() == kf::ErrorCode::Parse && g_last_error.find("cannot open") != std::string::npos)
      return KF_E_IO;
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KF_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KF_E_INTERNAL;
  }
}

kf_status null_argument(const char* name) {
  g_last_error = std::string(name) + " must not be NULL";
  return KF_E_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

kf::Frame to_frame(const kf_frame* f) {
  return kf::build_frame(kf::KreinSpace(f->file.p, f->file.q), f->file.vectors);
}

std::string summary_of(const kf::AnalysisReport& r) {
  std::ostringstream o;
  o << "space (p, q) = (" << r.p << ", " << r.q << "), " << r.n_vectors << " vectors\n";
  o << "I+ = {";
  for (std::size_t i = 0; i < r.plus_indices.size(); ++i) o << (i ? ", " : "") << r.plus_indices[i];
  o << "}, I- = {";
  for (std::size_t i = 0; i < r.minus_indices.size(); ++i) o << (i ? ", " : "") << r.minus_indices[i];
  o << "}\n";
  if (!r.is_jframe) {
    o << "not a J-frame:";
    for (const auto& reason : r.reasons) o << "\n  " << reason;
    o << "\n";
    return o.str();
  }
  o << "J-frame\n";
  if (r.details) {
    const auto& b = r.details->bounds;
    o << "bounds: alpha+ " << b.alpha_plus << ", beta+ " << b.beta_plus << ", alpha- " << b.alpha_minus
      << ", beta- " << b.beta_minus << ", gamma+ " << b.gamma_plus << ", delta+ " << b.delta_plus
      << ", gamma- " << b.gamma_minus << ", delta- " << b.delta_minus << "\n";
    o << "spectrum:";
    for (const auto& z : r.details->spectrum) o << " " << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    o << "\n";
  }
  int failed = 0;
  for (const auto& c : r.checks) {
    if (c.pass) continue;
    ++failed;
    o << (c.gating ? "FAILED " : "note   ") << c.name << ": " << c.value << " " << c.relation << " "
      << c.tolerance << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
  }
  o << r.checks.size() - failed << "/" << r.checks.size() << " checks pass\n";
  return o.str();
}

}  // namespace

extern "C" {

const char* kf_last_error(void) { return g_last_error.c_str(); }

const char* kf_status_name(kf_status status) {
  switch (status) {
    case KF_OK: return "ok";
    case KF_E_ARGUMENT: return "invalid argument";
    case KF_E_PARSE: return "parse error";
    case KF_E_IO: return "i/o error";
    case KF_E_NOT_JFRAME: return "not a J-frame";
    case KF_E_SPECTRAL: return "spectrum not in the open right half-plane";
    case KF_E_GENERATION: return "generation exhausted";
    case KF_E_NUMERIC: return "numerical check failed";
    case KF_E_INTERNAL: return "internal error";
  }
  return "unknown";
}

void kf_string_free(char* s) { std::free(s); }

kf_status kf_frame_parse(const char* json, kf_frame** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto f = std::make_unique<kf_frame>();
    f->file = kf::parse_frame_file(json);
    *out = f.release();
    return KF_OK;
  });
}

kf_status kf_frame_load(const char* path, kf_frame** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    const std::string text = kf::read_text_file(path);
    return kf_frame_parse(text.c_str(), out);
  });
}

kf_status kf_frame_save(const kf_frame* frame, const char* path) {
  if (!frame) return null_argument("frame");
  if (!path) return null_argument("path");
  return guarded([&] {
    try {
      kf::write_text_file(path, kf::emit_frame_file(frame->file));
    } catch (const kf::Error& e) {
      g_last_error = e.what();
      return KF_E_IO;
    }
    return KF_OK;
  });
}

kf_status kf_frame_to_json(const kf_frame* frame, char** out) {
  if (!frame) return null_argument("frame");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = duplicate(kf::emit_frame_file(frame->file));
    return KF_OK;
  });
}

int kf_frame_size(const kf_frame* frame) {
  return frame ? static_cast<int>(frame->file.vectors.cols()) : 0;
}

void kf_frame_free(kf_frame* frame) { delete frame; }

void kf_gen_config_default(kf_gen_config* cfg) {
  if (!cfg) return;
  const kf::GenConfig d;
  *cfg = {d.p, d.q, d.n_plus, d.n_minus, d.angular_norm_cap, d.conditioning_cap, d.seed};
}

kf_status kf_generate(const kf_gen_config* cfg, kf_frame** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] {
    kf::GenConfig g;
    g.p = cfg->p;
    g.q = cfg->q;
    g.n_plus = cfg->n_plus;
    g.n_minus = cfg->n_minus;
    g.angular_norm_cap = cfg->angular_norm_cap;
    g.conditioning_cap = cfg->conditioning_cap;
    g.seed = cfg->seed;
    const kf::Frame F = kf::random_jframe(g);
    auto f = std::make_unique<kf_frame>();
    f->file = {g.p, g.q, F.vectors(), std::nullopt};
    *out = f.release();
    return KF_OK;
  });
}

kf_status kf_analyze(const kf_frame* frame, const char* const* tol_names, const double* tol_values,
                     int n, kf_analysis** out) {
  if (!frame) return null_argument("frame");
  if (!out) return null_argument("out");
  if (n > 0 && (!tol_names || !tol_values)) return null_argument("tolerance arrays");
  return guarded([&] {
    kf::Tolerances tol;
    for (int i = 0; i < n; ++i) kf::set_tolerance(tol, tol_names[i], tol_values[i]);
    auto a = std::make_unique<kf_analysis>();
    a->report = kf::analyze(to_frame(frame), tol);
    *out = a.release();
    return KF_OK;
  });
}

int kf_analysis_exit_code(const kf_analysis* analysis) {
  return analysis ? analysis->report.exit_code : 3;
}

kf_status kf_analysis_report(const kf_analysis* analysis, char** json) {
  if (!analysis) return null_argument("analysis");
  if (!json) return null_argument("json");
  return guarded([&] {
    *json = duplicate(kf::emit_report(analysis->report));
    return KF_OK;
  });
}

kf_status kf_analysis_summary(const kf_analysis* analysis, char** text) {
  if (!analysis) return null_argument("analysis");
  if (!text) return null_argument("text");
  return guarded([&] {
    *text = duplicate(summary_of(analysis->report));
    return KF_OK;
  });
}

void kf_analysis_free(kf_analysis* analysis) { delete analysis; }

kf_status kf_enclosure(const kf_frame* frame, char** svg, char** regions_json) {
  if (!frame) return null_argument("frame");
  return guarded([&] {
    const kf::Frame F = to_frame(frame);
    const kf::JFrameReport jr = kf::is_jframe(F);
    if (!jr.is_jframe) throw kf::Error(kf::ErrorCode::NotJFrame, jr.failure_reason());
    const kf::EnclosureSet set = kf::enclosures(F);
    std::string svg_text, json_text;
    if (svg) svg_text = kf::render_enclosure_svg(set);
    if (regions_json) json_text = kf::regions_to_json(set).dump(2) + "\n";
    if (svg) *svg = duplicate(svg_text);
    if (regions_json) *regions_json = duplicate(json_text);
    return KF_OK;
  });
}

kf_status kf_synthesize(const char* operator_json, int n_plus, int n_minus, uint64_t seed,
                        kf_frame** out, kf_synthesis_info* info) {
  if (!operator_json) return null_argument("operator_json");
  if (!out) return null_argument("out");
  return guarded([&] {
    const kf::OperatorFile op = kf::parse_operator_file(operator_json);
    const kf::KreinSpace space(op.p, op.q);
    const kf::Mat& S = op.matrix;
    const double s_norm = kf::linalg::norm2(S);
    const kf::Mat JS = space.J() * S;
    if (kf::linalg::norm2(JS - JS.adjoint()) > 1e-10 * s_norm)
      throw kf::Error(kf::ErrorCode::InvalidArgument, "matrix: J S is not Hermitian");
    if (kf::linalg::rank(S, 1e-12) < S.rows())
      throw kf::Error(kf::ErrorCode::SingularS, "matrix: operator is not invertible");
    const kf::SynthesisResult syn = kf::synthesize_from_operator(S, space, n_plus, n_minus, seed);

    auto f = std::make_unique<kf_frame>();
    f->file = {op.p, op.q, syn.synthesis, std::nullopt};
    kf::json diag{{"operator_residual", syn.operator_residual},
                  {"prescribed", {{"n_plus", n_plus}, {"n_minus", n_minus}}},
                  {"realized", {{"n_plus", syn.realized_plus}, {"n_minus", syn.realized_minus}}},
                  {"sign_mismatch", syn.sign_mismatch},
                  {"is_jframe", syn.is_jframe},
                  {"seed", seed}};
    kf::json mism = kf::json::array();
    for (int i : syn.mismatched) mism.push_back(i + 1);
    diag["mismatched"] = mism;
    if (!syn.diagnostics.empty()) diag["message"] = syn.diagnostics;
    f->file.diagnostics = diag;
    if (info)
      *info = {syn.operator_residual, syn.sign_mismatch ? 1 : 0, syn.realized_plus,
               syn.realized_minus, syn.is_jframe ? 1 : 0};
    *out = f.release();
    return KF_OK;
  });
}

void kf_verify_config_default(kf_verify_config* cfg) {
  if (!cfg) return;
  const kf::SuiteConfig d;
  *cfg = {d.seeds, nullptr, d.angular_norm_cap, d.conditioning_cap, d.threads, nullptr};
}

kf_status kf_verify(const kf_verify_config* cfg, char** table, int* all_pass) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    kf::SuiteConfig s;
    if (cfg->seeds < 1) throw kf::Error(kf::ErrorCode::InvalidArgument, "seeds: must be at least 1");
    s.seeds = cfg->seeds;
    if (cfg->sizes) s.sizes = kf::parse_sizes(cfg->sizes);
    if (cfg->angular_norm_cap > 0.0) s.angular_norm_cap = cfg->angular_norm_cap;
    if (cfg->conditioning_cap >= 1.0) s.conditioning_cap = cfg->conditioning_cap;
    s.threads = cfg->threads;
    if (cfg->tolerance_overrides) {
      std::stringstream ss(cfg->tolerance_overrides);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
          throw kf::Error(kf::ErrorCode::InvalidArgument, "tolerance override: expected name=value");
        try {
          s.tolerance_overrides[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
          throw kf::Error(kf::ErrorCode::InvalidArgument, "tolerance override: bad value in '" + item + "'");
        }
      }
    }
    const auto props = kf::run_suite(s);
    bool ok = true;
    for (const auto& p : props) ok = ok && (p.pass || p.informational);
    if (table) *table = duplicate(kf::format_table(props));
    if (all_pass) *all_pass = ok ? 1 : 0;
    return KF_OK;
  });
}

}  // extern "C"
