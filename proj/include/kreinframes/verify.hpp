#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kreinframes/genkit.hpp"

namespace kf {

/// Everything measured on one generated instance. NaN marks a quantity that
/// could not be computed (see `error`).
struct InstanceMetrics {
  GenConfig config;
  std::string error;

  bool generated_jframe = false;
  bool deterministic = false;
  double realized_angular_norm = 0.0;
  double operator_split = 0.0;
  double block_reassembly = 0.0;  // worst of Cork, Edinburgh and the four S+- forms
  double inverse_forms = 0.0;
  double inverse_duality = 0.0;
  double angular_norm_max = 0.0;  // max(||K||, ||L||)
  double positivity_margin = 0.0;  // min eigenvalue over A, D + K^H A K, D', A' + L D' L^H
  double bounds_oracle = 0.0;
  double min_real_part = 0.0;
  bool conjugate_symmetric = false;
  int outside_cork = 0;
  int outside_edinburgh = 0;
  int outside_strip = 0;
  int outside_bounds = 0;
  double schur_at_spectrum = 0.0;  // worst relative singularity of S2, S1 at eigenvalues
  double schur_off_spectrum = 0.0;  // best relative singularity away from the spectrum
  double sqrt_residual = 0.0;
  bool sqrt_sector = false;
  double sqrt_krein_selfadjoint = 0.0;
  double sqrt_commutes = 0.0;
  double sqrt_inverse_consistency = 0.0;
  double contour_agreement = 0.0;
  double contour_errors[3] = {0.0, 0.0, 0.0};  // N = 16, 32, 64
  double coisometry = 0.0;
  double polar_reassembly = 0.0;
  double polar_projection = 0.0;
  double dual_polar = 0.0;
  double link_partial_isometry = 0.0;
  double link_reassembly = 0.0;
  double link_projections = 0.0;
  double link_unitary_recovery = 0.0;  // ||W - E1 V|| for T2 = T1 V
  double j_unitary = 0.0;
  double synthesis_roundtrip = 0.0;
  bool synthesis_sign_mismatch = false;
  double reconstruction = 0.0;
  double dual_operator = 0.0;
  double dual_spans = 0.0;
  bool dual_signs = false;
  bool operator_conditions = false;

  bool contour_converges() const {
    return contour_errors[0] > contour_errors[1] && contour_errors[1] > contour_errors[2];
  }
};

InstanceMetrics measure_instance(const GenConfig& cfg);

struct SuiteConfig {
  int seeds = 200;
  std::vector<std::pair<int, int>> sizes{{1, 1}, {2, 1}, {3, 2}, {4, 4}};
  double angular_norm_cap = 0.4;
  double conditioning_cap = 1.5;
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  std::map<std::string, double> tolerance_overrides;  // test hook
};

/// Frame sizes are drawn so that n_plus <= 3p and n_minus <= 3q.
std::vector<GenConfig> suite_instances(const SuiteConfig& cfg);

/// Metrics of every instance, in instance order regardless of threading.
std::vector<InstanceMetrics> measure_all(const std::vector<GenConfig>& instances, int threads);

struct PropertyResult {
  std::string name;
  std::string relation;  // "value <relation> tolerance"
  double tolerance = 0.0;
  double worst = 0.0;
  int failures = 0;
  int instances = 0;
  bool informational = false;
  bool pass = false;
};

std::vector<PropertyResult> evaluate_properties(const std::vector<InstanceMetrics>& metrics,
                                                const std::map<std::string, double>& overrides = {});

std::vector<PropertyResult> run_suite(const SuiteConfig& cfg);

std::string format_table(const std::vector<PropertyResult>& props);

/// "1+1,2+1" -> {(1,1),(2,1)}. Throws InvalidArgument.
std::vector<std::pair<int, int>> parse_sizes(const std::string& text);

}  // namespace kf
