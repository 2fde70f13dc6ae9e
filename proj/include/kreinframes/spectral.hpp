#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kreinframes/jframe.hpp"

namespace kf {

struct SpectrumData {
  /// Eigenvalues with multiplicity. Members of a numerical cluster (a
  /// defective eigenvalue splits into O(sqrt(eps)) satellites) are replaced by
  /// the cluster mean, which is accurate to rounding.
  std::vector<cplx> eigenvalues;
  /// Eigenvalues exactly as returned by the eigensolver.
  std::vector<cplx> raw;
  std::vector<bool> is_real;
  double real_part_min = 0.0;
  /// Only evaluated when a fundamental symmetry was supplied.
  std::optional<bool> conjugate_symmetric;
};

/// Eigenvalues of S. With `J`, conjugate symmetry (implied by J S Hermitian)
/// is checked at pairing tolerance 1e-8 (relative to 1 + |lambda|).
SpectrumData spectrum(const Mat& S, const Tolerances& tol = {}, const Mat* J = nullptr);

/// D - lambda + K^H A (A - lambda)^{-1} A K. Throws LambdaInSpectrum.
Mat schur_complement_2(const BlockRepCork& rep, cplx lambda);

/// A' - lambda + L D' (D' - lambda)^{-1} D' L^H. Throws LambdaInSpectrum.
Mat schur_complement_1(const BlockRepEdinburgh& rep, cplx lambda);

/// Smallest singular value of `m` divided by `scale` (typically ||S|| + |lambda|).
double relative_singularity(const Mat& m, double scale);

enum class EnclosureSource { Cork, Edinburgh, FrameBounds, ImaginaryStrip };

std::string to_string(EnclosureSource s);

struct Disk {
  double center = 0.0;
  double radius = 0.0;
  bool open = true;
};

/// Conjunction of primitive sets. Non-real eigenvalues must lie in every disk,
/// to the right of `halfplane_re_gt` and within the `imag_abs_max` strip;
/// real eigenvalues must lie in `real_interval`. Absent members impose nothing.
struct EnclosureRegion {
  EnclosureSource source = EnclosureSource::Cork;
  std::vector<Disk> disks;
  std::optional<double> halfplane_re_gt;
  std::optional<double> imag_abs_max;
  std::optional<std::pair<double, double>> real_interval;
  /// Named scalars the region was built from (a-, a+, d-, ..., eps-, alpha, gamma).
  std::map<std::string, double> parameters;
};

/// Real part in [min(a-, b-), max(a+, d+)]; non-real part in the open disk
/// |z - a+| < a+ and Re z > b-/2, plus the strip |Im z| <= ||AK||.
EnclosureRegion enclosure_cork(const BlockRepCork& rep);

/// Real part in [min(d'-, b'-), max(a'+, d'+)]; non-real part in the open disk
/// |z - d'+| < d'+ and Re z > b'-/2, plus the strip |Im z| <= ||L D'||.
EnclosureRegion enclosure_edinburgh(const BlockRepEdinburgh& rep);

/// Strip |Im z| <= min(||AK||, ||L D'||) for the non-real spectrum.
EnclosureRegion enclosure_imag_bound(const BlockRepCork& rep_c, const BlockRepEdinburgh& rep_e);

/// Region from the eight J-frame bounds (eps-, eps+, alpha, gamma).
EnclosureRegion enclosure_from_bounds(const JFrameBounds& b);

/// [lo, hi] of two closed intervals; nullopt when disjoint.
std::optional<std::pair<double, double>> intersect(std::pair<double, double> a,
                                                   std::pair<double, double> b);

enum class Membership { Inside, BoundaryContact, Outside };

std::string to_string(Membership m);

struct MembershipReport {
  EnclosureSource source = EnclosureSource::Cork;
  std::vector<Membership> verdicts;  // one per eigenvalue
  double slack = 1e-9;
  bool all_contained = true;  // no Outside verdict
};

/// Boundary slack is tol.enclosure * (1 + |lambda|).
MembershipReport check_membership(const SpectrumData& spec, const EnclosureRegion& region,
                                  const Tolerances& tol = {});

}  // namespace kf
