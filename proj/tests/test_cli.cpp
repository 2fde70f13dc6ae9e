#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace kf;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string work(const std::string& name) { return std::string(KF_WORK_DIR) + "/" + name; }

// Runs the CLI with `args`; stdout and stderr are captured together.
Run cli(const std::string& args, const std::string& env = "") {
  const std::string log = work("cli_output.txt");
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + KF_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(log);
  return r;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("cli analyze") {
  const std::string report = work("re1_report.json");
  const std::string svg = work("re1.svg");
  const Run r = cli("analyze " + q(kft::data_path("re1.json")) + " --report " + q(report) + " --svg " + q(svg));
  CHECK(r.code == 0);
  const AnalysisReport rep = parse_report(read_text_file(report));
  REQUIRE(rep.details);
  CHECK(std::abs(rep.details->K(0, 0) - cplx(-0.5)) <= 1e-12);
  CHECK(std::abs(rep.details->bounds.alpha_minus - 3.0) <= 1e-12);
  CHECK(read_text_file(svg).find("<svg") != std::string::npos);

  const Run n = cli("analyze " + q(kft::data_path("not_jframe_neutral.json")) + " --report " + q(work("neg.json")));
  CHECK(n.code == 2);
  CHECK(n.out.find(kReasonMinusNotMaximal) != std::string::npos);
  CHECK_FALSE(parse_report(read_text_file(work("neg.json"))).is_jframe);

  write_text_file(work("truncated.json"), "{\"space\": {\"p\": 1, \"q\": 1}, \"vectors\": [[[1,0]");
  const Run t = cli("analyze " + q(work("truncated.json")));
  CHECK(t.code == 64);
  CHECK(t.out.find("malformed JSON") != std::string::npos);

  write_text_file(work("badfield.json"), "{\"space\": {\"p\": 1, \"q\": 1}, \"vectors\": [[[1,0],[0]]]}");
  const Run b = cli("analyze " + q(work("badfield.json")));
  CHECK(b.code == 64);
  CHECK(b.out.find("vectors[0][1]") != std::string::npos);

  CHECK(cli("analyze " + q(kft::data_path("re1.json")) + " --tol bogus=1").code == 64);
  CHECK(cli("analyze " + q(kft::data_path("re1.json")) + " --tol enclosure=1e-6").code == 0);
  CHECK(cli("frobnicate").code == 64);
}

TEST_CASE("cli generate") {
  const std::string a = work("gen_a.json"), b = work("gen_b.json");
  const Run r = cli("generate --p 2 --q 1 --nplus 4 --nminus 2 --seed 7 --out " + q(a));
  CHECK(r.code == 0);
  CHECK(r.out.find("seed 7") != std::string::npos);
  CHECK(cli("generate --p 2 --q 1 --nplus 4 --nminus 2 --seed 7 --out " + q(b)).code == 0);
  CHECK(read_text_file(a) == read_text_file(b));
  CHECK(cli("analyze " + q(a)).code == 0);

  CHECK(cli("generate --p 2 --q 1 --nplus 4 --nminus 2 --out " + q(b), "KREIN_FRAMES_SEED=7").code == 0);
  CHECK(read_text_file(a) == read_text_file(b));
  const Run flag_wins = cli("generate --p 2 --q 1 --nplus 4 --nminus 2 --seed 8 --out " + q(b), "KREIN_FRAMES_SEED=7");
  CHECK(flag_wins.out.find("seed 8") != std::string::npos);
  CHECK(read_text_file(a) != read_text_file(b));

  const std::string z = work("gen_zero.json"), zr = work("gen_zero_report.json");
  CHECK(cli("generate --p 2 --q 2 --nplus 3 --nminus 3 --cap 0 --seed 3 --out " + q(z)).code == 0);
  CHECK(cli("analyze " + q(z) + " --report " + q(zr)).code == 0);
  const AnalysisReport rep = parse_report(read_text_file(zr));
  CHECK(linalg::norm2(rep.details->K) <= 1e-12);
  CHECK(linalg::norm2(rep.details->L) <= 1e-12);

  CHECK(cli("generate --p 2 --q 1 --nplus 1 --out " + q(b)).code == 64);
  CHECK(cli("generate --cap 0.99 --out " + q(b)).code == 64);
  CHECK(cli("generate --p 2").code == 64);
}

TEST_CASE("cli enclosure") {
  const std::string svg = work("enc.svg");
  const Run r = cli("enclosure " + q(kft::data_path("re1.json")) + " --svg " + q(svg));
  CHECK(r.code == 0);
  const std::string text = read_text_file(svg);
  CHECK(text.find("real-interval") != std::string::npos);
  CHECK(text.find("eigenvalue real") != std::string::npos);
  CHECK(text.find("eigenvalue nonreal") == std::string::npos);

  const Run j = cli("enclosure " + q(kft::data_path("re1.json")));
  CHECK(j.code == 0);
  const json regions = json::parse(j.out);
  CHECK(regions.dump().find("eps_minus") != std::string::npos);

  CHECK(cli("enclosure " + q(kft::data_path("not_jframe_neutral.json"))).code == 2);
}

TEST_CASE("cli synthesize") {
  const std::string out = work("syn.json");
  const Run id = cli("synthesize --operator " + q(work("missing_op.json")) + " --nplus 1 --nminus 1 --out " + q(out));
  CHECK(id.code == 64);

  OperatorFile op;
  op.p = 2;
  op.q = 1;
  op.matrix = Mat::Identity(3, 3);
  write_text_file(work("identity_op.json"), emit_operator_file(op));
  const Run r = cli("synthesize --operator " + q(work("identity_op.json")) + " --nplus 2 --nminus 1 --seed 1 --out " + q(out));
  CHECK((r.code == 0 || r.code == 4));
  const auto at = r.out.find("||TT+ - S||/||S|| = ");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(r.out.substr(at + 20)) <= 1e-12);
  const FrameFile f = parse_frame_file(read_text_file(out));
  const Frame F = build_frame(KreinSpace(f.p, f.q), f.vectors);
  CHECK(F.size() == 3);

  const std::string re1 = work("syn_re1.json");
  const Run s = cli("synthesize --operator " + q(kft::data_path("re1_operator.json")) + " --nplus 2 --nminus 1 --seed 2 --out " + q(re1));
  CHECK((s.code == 0 || s.code == 4));
  const FrameFile g = parse_frame_file(read_text_file(re1));
  if (s.code == 4) CHECK(g.diagnostics.has_value());
  if (s.code == 0) {
    const AnalysisReport rep = analyze(build_frame(KreinSpace(1, 1), g.vectors));
    CHECK(kft::dist(rep.details->S, kft::mat({{0.0, 2.0}, {-2.0, 4.0}})) <= 1e-9 * 4.5);
  }

  CHECK(cli("synthesize --operator " + q(kft::data_path("negative_eigenvalue_operator.json")) +
            " --nplus 1 --nminus 1 --out " + q(out)).code == 5);
}

TEST_CASE("cli synthesize exit codes agree with the library verdict") {
  const std::string out = work("syn_seed.json");
  const Mat S = kft::mat({{0.0, 2.0}, {-2.0, 4.0}});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SynthesisResult lib = synthesize_from_operator(S, KreinSpace(1, 1), 1, 1, seed);
    const Run r = cli("synthesize --operator " + q(kft::data_path("re1_operator.json")) +
                      " --nplus 1 --nminus 1 --seed " + std::to_string(seed) + " --out " + q(out));
    CHECK(r.code == (lib.sign_mismatch ? 4 : 0));
    CHECK((parse_frame_file(read_text_file(out)).vectors.array() == lib.synthesis.array()).all());
  }
}

TEST_CASE("cli verify") {
  const Run smoke = cli("verify --seeds 1");
  CHECK(smoke.code == 0);
  CHECK(smoke.out.find("all properties pass") != std::string::npos);
  const Run sized = cli("verify --seeds 2 --sizes 2+1,3+2,5+3");
  CHECK(sized.code == 0);
  const Run broken = cli("verify --seeds 1 --sizes 1+1 --override-tolerance sqrt-residual=-1");
  CHECK(broken.code != 0);
  CHECK(broken.out.find("failing properties: sqrt-residual") != std::string::npos);
  CHECK(cli("verify --seeds 1 --override-tolerance no-such-property=1").code == 64);
  CHECK(cli("verify --sizes 2x1").code == 64);
}
