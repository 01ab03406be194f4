#pragma once

#include <cstdint>
#include <vector>

#include "declab/domain.hpp"
#include "declab/parallel.hpp"

namespace declab {

// Billiard ray: straight (speed 1) between specular reflections off disks.
struct Ray {
  double px = 0.0, py = 0.0; // position
  double dx = 1.0, dy = 0.0; // unit direction
  double time = 0.0;         // elapsed path time
};

struct RayPath {
  std::vector<Ray> vertices; // state at the start of each straight segment,
                             // plus the terminal point at t_max
  bool tangential_flagged = false;
};

// Specular tracing until t_max. A tangential hit (|d.n| < 1e-12) is flagged
// and the segment continues without reflection.
RayPath trace_ray(const Ray& start, const std::vector<Disk>& obstacles, double t_max);

struct GccSampling {
  int n_pos = 200;
  int n_dir = 64;
  double t_max = 50.0;
  double eps_omega = 1e-3; // omega = { a > eps_omega }
  std::uint64_t seed = 1;
};

struct GccReport {
  bool satisfied = false;
  double t0_estimate = 0.0; // max over sampled rays of the first success time
  Ray worst_ray;            // start of the argmax ray (or of a failing ray)
  long num_samples = 0;
  double escape_radius = 0.0; // 0 = plain GCC, > 0 = exterior variant
  long unresolved = 0;        // rays that neither met omega nor escaped
  bool tangential_flagged = false;
};

// Every sampled ray must meet { a > eps } before t_max. Start positions are
// drawn in B_{r0+1} minus the obstacles; directions are uniform angles. Rays
// along the axis between each obstacle pair are always included, so two-disk
// traps are found deterministically.
GccReport check_gcc(const Field& damper, const DomainSpec& spec, const GridMask& g,
                    const GccSampling& s, ThreadPool* pool = nullptr);

// Exterior variant: leaving B_R also counts as success.
GccReport check_egc(const Field& damper, const DomainSpec& spec, const GridMask& g,
                    const GccSampling& s, double escape_radius, ThreadPool* pool = nullptr);

} // namespace declab
