#pragma once

#include <vector>

#include "declab/domain.hpp"
#include "declab/parallel.hpp"

namespace declab {

// Staggered discrete energy of two consecutive solution levels,
//   E = 1/2 * sum h^N [ ((u_new - u_old)/dt)^2 + grad_h u_new . grad_h u_old ],
// with forward-difference gradients. This is the unique quadratic form that
// the damped leapfrog scheme dissipates exactly.
double total_energy(const Field& u_old, const Field& u_new, double dt, const GridMask& g,
                    ThreadPool* pool = nullptr);

// Same quadrature restricted to nodes with |x| <= r (links attributed to their
// lower endpoint). r at the box halfwidth or beyond covers the whole grid.
double local_energy(const Field& u_old, const Field& u_new, double dt, const GridMask& g,
                    double r, double box_halfwidth);

double l2_norm_sq(const Field& f, const GridMask& g, ThreadPool* pool = nullptr);

// sum h^N a * ((u_next - u_prev)/(2 dt))^2, the discrete damping integral.
double dissipation_term(const Field& u_prev, const Field& u_next, const Field& a, double dt,
                        const GridMask& g, ThreadPool* pool = nullptr);

// |(E^{n+1/2} - E^{n-1/2})/dt + dissipation| / max(E^{n+1/2}, floor)
double dissipation_residual(const Field& u_prevprev, const Field& u_prev, const Field& u_curr,
                            const Field& a, double dt, const GridMask& g,
                            ThreadPool* pool = nullptr);

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> e_total;
  std::vector<double> e_local; // at local_radius
  std::vector<double> l2_sq;
  std::vector<double> residual;     // dissipation residual at the observer step
  std::vector<double> cutoff_ratio; // ||f||^2 / E_r1, empty unless requested
  double local_radius = 0.0;
  double max_residual = 0.0; // over all steps where the residual was evaluated
  bool energy_monotone = true;
  // per-step energy extremes (populated only when stepping with per-step checks)
  double e_step_min = 0.0, e_step_max = 0.0;

  std::size_t size() const { return times.size(); }
};

struct DecayFit {
  double exponent = 0.0; // y ~ (1+t)^{-exponent}
  double intercept = 0.0;
  double r2 = 0.0;
  double t_min = 0.0, t_max = 0.0;
  std::size_t n_points = 0;
};

// Least-squares line on (log(1+t), log y); exponent = -slope.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                   double t_min, double t_max);

// min(1 + N/2, 3N/4), evaluated in quarters so the result is exact.
double theta_exponent(int dim);

// Adaptive-Simpson value of int_0^t (1+t-s)^{-a} (1+s)^{-b} ds divided by
// (1+t)^{-min(a,b)}; requires max(a,b) > 1.
double conv_bound_ratio(double a, double b, double t);

// Adaptive Simpson on [lo,hi] to a relative tolerance (test oracle reuses it).
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol);

// Smooth radial cutoff: 0 for |x| <= r0, 1 for |x| >= r1.
Field build_cutoff(const DomainSpec& spec, const GridMask& g);

// f = -grad_h(phi) . grad_h(u) - lap_h(phi) u  (centered differences).
Field cutoff_forcing(const Field& u, const Field& phi, const GridMask& g);

} // namespace declab
