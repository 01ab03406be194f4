#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "declab/domain.hpp"
#include "declab/resolvent.hpp"

namespace declab {

// Resolvent runs use their own (much smaller) box so direct solves stay cheap.
struct ResolventConfig {
  double box_halfwidth = 5.0;
  double spacing = 0.05;
  FrequencyBand intermediate{0.25, 4.0, 40};
  FrequencyBand high{5.0, 40.0, 40};
  double tolerance = 1e-10;
  std::string rhs = "bump"; // bump | spread | random
  bool probe = false;       // low-frequency block-resolvent probe
  double probe_delta = 0.25;
  double probe_chi_radius = 0.0; // 0 = support_radius + 1
  std::vector<double> probe_betas{0.2, 0.1, 0.05, 0.025};
  int probe_n_s = 9;

  bool operator==(const ResolventConfig&) const = default;
};

struct GccConfig {
  int n_pos = 200;
  int n_dir = 64;
  double t_max = 50.0;
  double eps_omega = 1e-3;
  double escape_radius = 0.0; // 0 = plain GCC

  bool operator==(const GccConfig&) const = default;
};

struct ExperimentConfig {
  std::string scenario = "default";

  // [domain]
  int dimension = 2;
  double box_halfwidth = 0.0; // 0 = auto: r1 + t_end/2 + 10 h
  double spacing = 0.1;
  std::vector<Disk> obstacles;
  double damper_radius = 2.0;
  double support_radius = 3.0;

  // [damper]
  std::string damper_kind = "exterior_smooth";
  double damper_inner_radius = 1.0;
  Rect damper_hole{};

  // [initial]
  std::string initial_kind = "bump_both";
  double bump_cx = 0.0, bump_cy = 0.0;
  double bump_width = 0.5;

  // [run]
  double t_end = 50.0;
  double cfl_safety = 0.9;
  long observer_stride = 0;  // 0 = auto
  double fit_t_min = 0.0;    // 0 = auto: max(10, 2 (r0 + r1))
  double fit_t_max = 0.0;    // 0 = auto: 0.9 t_end
  double local_radius = 0.0; // 0 = support_radius
  bool per_step_dissipation = false;
  bool cutoff_diagnostic = false;
  GccConfig gcc;

  ResolventConfig resolvent;

  // [output]
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::vector<double> snapshot_times;

  bool operator==(const ExperimentConfig&) const = default;

  // resolved values
  double resolved_box_halfwidth() const;
  double resolved_fit_t_min() const;
  double resolved_fit_t_max() const;
  double resolved_local_radius() const;

  DomainSpec domain_spec() const;           // wave/heat grids
  DomainSpec resolvent_domain_spec() const; // resolvent grids
  DamperSpec damper_spec() const;
  BumpSpec bump_spec() const;
  RhsFamily rhs_family() const;

  void validate() const; // throws Error(ValidationError)
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& c);

// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const ExperimentConfig& c);

} // namespace declab
