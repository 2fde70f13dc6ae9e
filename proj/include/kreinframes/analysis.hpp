#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kreinframes/fileio.hpp"
#include "kreinframes/genkit.hpp"
#include "kreinframes/spectral.hpp"
#include "kreinframes/sqrtpolar.hpp"

namespace kf {

/// One numerical verdict. `relation` reads "value <relation> tolerance".
/// Non-gating checks are reported but never change the exit code.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool pass = false;
  bool gating = true;
  std::string note;

  bool operator==(const Check&) const = default;
};

struct RegionReport {
  EnclosureRegion region;
  std::vector<Membership> verdicts;
  bool all_contained = true;
};

struct JFrameDetails {
  Mat S, S_plus, S_minus, Q;
  Mat A, K, D, DplusKAK, Z;
  Mat Aprime, L, Dprime, AplusLDL, Y;
  JFrameBounds bounds;
  std::vector<cplx> spectrum;
  std::vector<bool> spectrum_is_real;
  std::vector<RegionReport> regions;
  Mat P;  // principal square root
  Mat U;  // polar co-isometry, sign-sorted coefficient order
  ContourSpec contour;
  double sqrt_residual_triangular = 0.0;
  double sqrt_residual_contour = 0.0;
  double sqrt_agreement = 0.0;
  double coisometry_residual = 0.0;
  double reconstruction_residual = 0.0;
};

struct AnalysisReport {
  int p = 0;
  int q = 0;
  int n_vectors = 0;
  std::vector<int> plus_indices;  // 1-based
  std::vector<int> minus_indices;
  bool is_jframe = false;
  std::vector<std::string> reasons;
  std::optional<JFrameDetails> details;
  std::vector<Check> checks;
  int exit_code = 0;  // 0 all checks pass, 2 not a J-frame, 3 a gating check failed

  bool all_pass() const;
};

bool operator==(const RegionReport& a, const RegionReport& b);
bool operator==(const JFrameDetails& a, const JFrameDetails& b);
bool operator==(const AnalysisReport& a, const AnalysisReport& b);

/// Full pipeline: partition, J-frame test, operators, block representations,
/// bounds, spectrum with all enclosures, square roots, polar decomposition,
/// reconstruction and the canonical dual.
AnalysisReport analyze(const Frame& F, const Tolerances& tol = {});

json report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const json& j);
std::string emit_report(const AnalysisReport& r);
AnalysisReport parse_report(const std::string& text);

/// Enclosure regions of a J-frame: Cork, Edinburgh, imaginary strip, bounds.
struct EnclosureSet {
  SpectrumData spectrum;
  std::vector<EnclosureRegion> regions;
};

/// Throws NotJFrame.
EnclosureSet enclosures(const Frame& F, const Tolerances& tol = {});

json regions_to_json(const EnclosureSet& set);

/// Self-contained 800x600 SVG of the non-real enclosure, the real interval
/// [eps-, eps+] and the eigenvalues.
std::string render_enclosure_svg(const EnclosureSet& set);

/// Override one field of Tolerances by name (rank, pd, contract,
/// subspace_angle, real, enclosure). Throws InvalidArgument.
void set_tolerance(Tolerances& tol, const std::string& name, double value);

}  // namespace kf
