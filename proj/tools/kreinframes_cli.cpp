#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kreinframes.h"

namespace {

constexpr int kExitUsage = 64;

int exit_for(kf_status s) {
  switch (s) {
    case KF_OK: return 0;
    case KF_E_ARGUMENT:
    case KF_E_PARSE:
    case KF_E_IO: return kExitUsage;
    case KF_E_NOT_JFRAME: return 2;
    case KF_E_SPECTRAL: return 5;
    case KF_E_GENERATION: return 1;
    default: return 3;
  }
}

int report_failure(kf_status s) {
  std::cerr << "error: " << kf_status_name(s) << ": " << kf_last_error() << "\n";
  return exit_for(s);
}

// Owns a string handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { kf_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? p : ""; }
};

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t given) {
  if (flag->count() == 0) {
    if (const char* env = std::getenv("KREIN_FRAMES_SEED")) return std::stoull(env);
  }
  return given;
}

int cmd_analyze(const std::string& input, const std::string& report, const std::string& svg,
                const std::vector<std::string>& tol_overrides) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& item : tol_overrides) {
    const auto eq = item.find('=');
    try {
      if (eq == std::string::npos) throw std::invalid_argument(item);
      values.push_back(std::stod(item.substr(eq + 1)));
      names.push_back(item.substr(0, eq));
    } catch (const std::exception&) {
      std::cerr << "error: --tol expects name=value, got '" << item << "'\n";
      return kExitUsage;
    }
  }
  std::vector<const char*> name_ptrs;
  for (const auto& n : names) name_ptrs.push_back(n.c_str());

  kf_frame* frame = nullptr;
  if (kf_status s = kf_frame_load(input.c_str(), &frame); s != KF_OK) return report_failure(s);
  kf_analysis* analysis = nullptr;
  kf_status s = kf_analyze(frame, name_ptrs.data(), values.data(), static_cast<int>(names.size()), &analysis);
  if (s != KF_OK) {
    kf_frame_free(frame);
    return report_failure(s);
  }
  const int code = kf_analysis_exit_code(analysis);

  Text summary;
  kf_analysis_summary(analysis, summary.out());
  std::cout << summary.str();
  int result = code;
  if (!report.empty()) {
    Text json;
    kf_analysis_report(analysis, json.out());
    if (!write_file(report, json.str())) {
      std::cerr << "error: cannot write " << report << "\n";
      result = kExitUsage;
    }
  }
  if (!svg.empty() && code != 2) {
    Text image;
    if (kf_status e = kf_enclosure(frame, image.out(), nullptr); e != KF_OK) result = report_failure(e);
    else if (!write_file(svg, image.str())) {
      std::cerr << "error: cannot write " << svg << "\n";
      result = kExitUsage;
    }
  }
  kf_analysis_free(analysis);
  kf_frame_free(frame);
  return result;
}

int cmd_generate(kf_gen_config cfg, const std::string& out) {
  kf_frame* frame = nullptr;
  if (kf_status s = kf_generate(&cfg, &frame); s != KF_OK) return report_failure(s);
  kf_status s = kf_frame_save(frame, out.c_str());
  kf_frame_free(frame);
  if (s != KF_OK) return report_failure(s);
  std::cout << "seed " << cfg.seed << "\n";
  return 0;
}

int cmd_enclosure(const std::string& input, const std::string& svg) {
  kf_frame* frame = nullptr;
  if (kf_status s = kf_frame_load(input.c_str(), &frame); s != KF_OK) return report_failure(s);
  Text image, regions;
  kf_status s = svg.empty() ? kf_enclosure(frame, nullptr, regions.out())
                            : kf_enclosure(frame, image.out(), nullptr);
  kf_frame_free(frame);
  if (s != KF_OK) return report_failure(s);
  if (svg.empty()) {
    std::cout << regions.str();
  } else if (!write_file(svg, image.str())) {
    std::cerr << "error: cannot write " << svg << "\n";
    return kExitUsage;
  }
  return 0;
}

int cmd_synthesize(const std::string& op_path, int n_plus, int n_minus, std::uint64_t seed,
                   const std::string& out) {
  std::ifstream in(op_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << op_path << "\n";
    return kExitUsage;
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  kf_frame* frame = nullptr;
  kf_synthesis_info info{};
  if (kf_status s = kf_synthesize(text.c_str(), n_plus, n_minus, seed, &frame, &info); s != KF_OK)
    return report_failure(s);
  kf_status s = kf_frame_save(frame, out.c_str());
  kf_frame_free(frame);
  if (s != KF_OK) return report_failure(s);
  std::printf("seed %llu\nrelative residual ||TT+ - S||/||S|| = %.3e\n",
              static_cast<unsigned long long>(seed), info.operator_residual);
  if (info.sign_mismatch) {
    std::printf("sign partition mismatch: realized (%d, %d), prescribed (%d, %d)\n", info.realized_plus,
                info.realized_minus, n_plus, n_minus);
    return 4;
  }
  return 0;
}

int cmd_verify(kf_verify_config cfg) {
  Text table;
  int all_pass = 0;
  if (kf_status s = kf_verify(&cfg, table.out(), &all_pass); s != KF_OK) return report_failure(s);
  std::cout << table.str();
  if (all_pass) {
    std::cout << "all properties pass\n";
    return 0;
  }
  std::string failing;
  std::istringstream rows(table.str());
  for (std::string line; std::getline(rows, line);) {
    std::istringstream cells(line);
    std::string name, verdict;
    if (cells >> name >> verdict && verdict == "FAIL") failing += (failing.empty() ? "" : ", ") + name;
  }
  std::cout << "failing properties: " << failing << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frames in finite-dimensional Krein spaces: analysis, generation and enclosure plots"};
  app.require_subcommand(1);

  std::string input, report, svg, out, op_path, sizes, corrupt;
  std::vector<std::string> tols;
  auto* analyze = app.add_subcommand("analyze", "Full analysis of a frame file");
  analyze->add_option("input", input, "Frame file (JSON)")->required();
  analyze->add_option("--report", report, "Write the JSON analysis report here");
  analyze->add_option("--svg", svg, "Write the enclosure figure here");
  analyze->add_option("--tol", tols, "Tolerance override name=value (rank, pd, contract, subspace_angle, real, enclosure)");

  kf_gen_config gen;
  kf_gen_config_default(&gen);
  auto* generate = app.add_subcommand("generate", "Write a random J-frame");
  generate->add_option("--p", gen.p, "Positive index")->check(CLI::PositiveNumber);
  generate->add_option("--q", gen.q, "Negative index")->check(CLI::PositiveNumber);
  generate->add_option("--nplus", gen.n_plus, "Number of non-negative vectors (default p)");
  generate->add_option("--nminus", gen.n_minus, "Number of negative vectors (default q)");
  generate->add_option("--cap", gen.angular_norm_cap, "Angular operator norm cap in [0, 0.95]");
  generate->add_option("--cond", gen.conditioning_cap, "Coefficient conditioning cap in [1, 1e6]");
  auto* gen_seed = generate->add_option("--seed", gen.seed, "Random seed (else KREIN_FRAMES_SEED)");
  generate->add_option("--out", out, "Output frame file")->required();

  auto* enclosure = app.add_subcommand("enclosure", "Spectral enclosure figure or region parameters");
  enclosure->add_option("input", input, "Frame file (JSON)")->required();
  enclosure->add_option("--svg", svg, "Write the SVG here; otherwise print the regions as JSON");

  int syn_plus = 0, syn_minus = 0;
  std::uint64_t syn_seed = 1;
  auto* synthesize = app.add_subcommand("synthesize", "Build a frame with a prescribed frame operator");
  synthesize->add_option("--operator", op_path, "Operator file {space, matrix}")->required();
  synthesize->add_option("--nplus", syn_plus, "Number of non-negative coefficients")->required();
  synthesize->add_option("--nminus", syn_minus, "Number of negative coefficients")->required();
  auto* syn_seed_opt = synthesize->add_option("--seed", syn_seed, "Random seed (else KREIN_FRAMES_SEED)");
  synthesize->add_option("--out", out, "Output frame file")->required();

  kf_verify_config ver;
  kf_verify_config_default(&ver);
  auto* verify = app.add_subcommand("verify", "Randomized property suite");
  verify->add_option("--seeds", ver.seeds, "Seeds per size")->check(CLI::PositiveNumber);
  verify->add_option("--sizes", sizes, "Comma-separated p+q list, e.g. 2+1,3+2");
  verify->add_option("--cap", ver.angular_norm_cap, "Angular operator norm cap");
  verify->add_option("--cond", ver.conditioning_cap, "Coefficient conditioning cap");
  verify->add_option("--threads", ver.threads, "Worker threads (0: all cores)");
  verify->add_option("--override-tolerance", corrupt, "Replace property tolerances, name=value[,...]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(input, report, svg, tols);
    if (*generate) {
      if (generate->get_option("--nplus")->count() == 0) gen.n_plus = gen.p;
      if (generate->get_option("--nminus")->count() == 0) gen.n_minus = gen.q;
      gen.seed = resolve_seed(gen_seed, gen.seed);
      return cmd_generate(gen, out);
    }
    if (*enclosure) return cmd_enclosure(input, svg);
    if (*synthesize) return cmd_synthesize(op_path, syn_plus, syn_minus, resolve_seed(syn_seed_opt, syn_seed), out);
    if (*verify) {
      if (!sizes.empty()) ver.sizes = sizes.c_str();
      if (!corrupt.empty()) ver.tolerance_overrides = corrupt.c_str();
      return cmd_verify(ver);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
