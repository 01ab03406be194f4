#pragma once

#include <utility>
#include <vector>

#include "declab/domain.hpp"
#include "declab/metrics.hpp"
#include "declab/parallel.hpp"

namespace declab {

struct SolverState {
  Field u_prev; // level n-1
  Field u_curr; // level n
  double dt = 0.0;
  long step_index = 0;
  double time() const { return step_index * dt; }
};

// dt = safety * h / sqrt(N), the stability bound of the explicit leapfrog.
double cfl_timestep(double h, int dim, double safety = 0.9);

// Forward-Euler heat step size with margin below h^2/(2N) for N <= 2.
double heat_timestep(double h);

// Damped leapfrog update at every interior node:
//   u^{n+1} = [2 u^n - (1 - a dt/2) u^{n-1} + dt^2 lap_h u^n] / (1 + a dt/2).
// Throws Error(Blowup) when max|u^{n+1}| exceeds 1e12.
void step_into(const Field& u_prev, const Field& u_curr, const Field& a, const GridMask& g,
               double dt, Field& u_next, ThreadPool* pool = nullptr);

SolverState step(const SolverState& st, const Field& a, const GridMask& g,
                 ThreadPool* pool = nullptr);

// Second-order start: u^1 = u0 + dt u1 + (dt^2/2)(lap_h u0 - a u1).
SolverState make_initial_state(const Field& u0, const Field& u1, const Field& a,
                               const GridMask& g, double dt);

struct RunConfig {
  double t_end = 10.0;
  double cfl_safety = 0.9;
  long observer_stride = 0;      // 0 = every ceil(0.5/dt) steps
  double local_radius = 0.0;     // 0 = support_radius
  bool per_step_dissipation = false;
  bool cutoff_diagnostic = false;
  std::vector<double> snapshot_times;
};

struct RunResult {
  EnergyTrace trace;
  std::vector<std::pair<double, Field>> snapshots;
  SolverState final_state;
};

RunResult run_wave(const DomainSpec& spec, const GridMask& g, const Field& a, const Field& u0,
                   const Field& u1, const RunConfig& rc, ThreadPool* pool = nullptr);

struct HeatState {
  Field v_curr;
  double dt = 0.0;
  double time = 0.0;
};

// Explicit heat flow v_t = lap_h v from v0, sampled at the nearest step to
// each requested time. max_monotone reports the discrete maximum principle.
struct HeatRunResult {
  std::vector<double> times;
  std::vector<double> l2_sq;
  std::vector<double> max_abs;
  bool max_monotone = true;
  std::vector<std::pair<double, Field>> snapshots;
};

HeatRunResult run_heat(const GridMask& g, const Field& v0, double t_end,
                       const std::vector<double>& sample_times, bool keep_snapshots = false,
                       ThreadPool* pool = nullptr);

// Per-time L2 norm of u - v for matched snapshot lists.
struct GapTrace {
  std::vector<double> times;
  std::vector<double> gap; // ||u - v||_L2
};

GapTrace diffusion_gap(const std::vector<std::pair<double, Field>>& wave_snapshots,
                       const std::vector<std::pair<double, Field>>& heat_snapshots,
                       const GridMask& g);

// Streamed wave-vs-heat comparison on a shared observer-time grid; memory
// stays O(grid) instead of storing snapshot stacks.
struct HeatCompareResult {
  std::vector<double> times;
  std::vector<double> norm_u, norm_v, gap; // L2 norms
};

HeatCompareResult compare_heat(const DomainSpec& spec, const GridMask& g, const Field& a,
                               const Field& u0, const Field& u1, double t_end,
                               long observer_stride = 0, ThreadPool* pool = nullptr);

} // namespace declab
