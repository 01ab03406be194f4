#include "declab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace declab {

namespace {
constexpr const char* kModule = "wave-solver";
constexpr double kBlowup = 1e12;
constexpr double kEnergyFloor = 1e-30;

void check_shapes(const Field& u_prev, const Field& u_curr, const Field& a, const GridMask& g) {
  if (u_prev.size() != g.size() || u_curr.size() != g.size() || a.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "state/damper does not match grid");
}
} // namespace

double cfl_timestep(double h, int dim, double safety) {
  if (safety <= 0.0 || safety > 1.0)
    throw Error(Errc::SpecInvalid, kModule, "CFL safety must lie in (0, 1]");
  if (h <= 0.0 || (dim != 1 && dim != 2))
    throw Error(Errc::SpecInvalid, kModule, "bad spacing or dimension");
  return safety * h / std::sqrt(static_cast<double>(dim));
}

double heat_timestep(double h) { return 0.24 * h * h; }

void step_into(const Field& u_prev, const Field& u_curr, const Field& a, const GridMask& g,
               double dt, Field& u_next, ThreadPool* pool) {
  check_shapes(u_prev, u_curr, a, g);
  if (u_next.size() != g.size()) u_next.v.assign(g.size(), 0.0);

  const double c = dt * dt / (g.h * g.h);
  const double half_dt = 0.5 * dt;
  const long ny = g.ny, nx = g.nx;
  const bool two_d = g.dim == 2;

  std::vector<double> row_max(static_cast<std::size_t>(ny), 0.0);
  long row_lo = two_d ? 1 : 0;
  long row_hi = two_d ? ny - 1 : ny;
  parallel_for(pool, row_lo, row_hi, [&](long r0, long r1) {
    for (long iy = r0; iy < r1; ++iy) {
      const double* um = u_prev.v.data();
      const double* u0 = u_curr.v.data();
      const double* av = a.v.data();
      const NodeKind* kind = g.kind.data();
      double* out = u_next.v.data();
      double mx = 0.0;
      const std::size_t base = static_cast<std::size_t>(iy) * nx;
      for (long ix = 1; ix < nx - 1; ++ix) {
        std::size_t i = base + ix;
        if (kind[i] != NodeKind::Interior) {
          out[i] = 0.0;
          continue;
        }
        double lap = u0[i - 1] + u0[i + 1] - 2.0 * u0[i];
        if (two_d) lap += u0[i - nx] + u0[i + nx] - 2.0 * u0[i];
        double ad = half_dt * av[i];
        double val = (2.0 * u0[i] - (1.0 - ad) * um[i] + c * lap) / (1.0 + ad);
        out[i] = val;
        mx = std::max(mx, std::abs(val));
      }
      out[base] = 0.0;
      out[base + nx - 1] = 0.0;
      row_max[static_cast<std::size_t>(iy)] = mx;
    }
  });
  if (two_d) {
    std::fill_n(u_next.v.begin(), nx, 0.0);
    std::fill_n(u_next.v.begin() + static_cast<std::size_t>(ny - 1) * nx, nx, 0.0);
  }
  double mx = 0.0;
  for (double m : row_max) mx = std::max(mx, m);
  if (mx > kBlowup)
    throw Error(Errc::Blowup, kModule,
                "solution magnitude " + std::to_string(mx) + " exceeds 1e12; check CFL/config");
}

SolverState step(const SolverState& st, const Field& a, const GridMask& g, ThreadPool* pool) {
  SolverState out;
  out.dt = st.dt;
  out.step_index = st.step_index + 1;
  out.u_prev = st.u_curr;
  out.u_curr = Field(g.size(), 0.0);
  step_into(st.u_prev, st.u_curr, a, g, st.dt, out.u_curr, pool);
  return out;
}

SolverState make_initial_state(const Field& u0, const Field& u1, const Field& a,
                               const GridMask& g, double dt) {
  check_shapes(u0, u1, a, g);
  SolverState st;
  st.dt = dt;
  st.step_index = 1;
  st.u_prev = u0;
  apply_mask(st.u_prev, g);
  st.u_curr = Field(g.size(), 0.0);
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (!g.is_interior(i)) continue;
      double lap = (st.u_prev.v[i - 1] + st.u_prev.v[i + 1] - 2.0 * st.u_prev.v[i]) * inv_h2;
      if (g.dim == 2)
        lap += (st.u_prev.v[i - g.nx] + st.u_prev.v[i + g.nx] - 2.0 * st.u_prev.v[i]) * inv_h2;
      st.u_curr.v[i] =
          st.u_prev.v[i] + dt * u1.v[i] + 0.5 * dt * dt * (lap - a.v[i] * u1.v[i]);
    }
  }
  return st;
}

RunResult run_wave(const DomainSpec& spec, const GridMask& g, const Field& a, const Field& u0,
                   const Field& u1, const RunConfig& rc, ThreadPool* pool) {
  if (rc.t_end <= 0.0) throw Error(Errc::SpecInvalid, kModule, "t_end must be positive");
  const double dt = cfl_timestep(g.h, g.dim, rc.cfl_safety);
  const long stride =
      rc.observer_stride > 0 ? rc.observer_stride : static_cast<long>(std::ceil(0.5 / dt));
  const double local_r = rc.local_radius > 0.0 ? rc.local_radius : spec.support_radius;
  const long total_levels = std::max<long>(2, static_cast<long>(std::ceil(rc.t_end / dt)));

  RunResult res;
  res.trace.local_radius = local_r;

  Field phi;
  if (rc.cutoff_diagnostic) phi = build_cutoff(spec, g);

  SolverState st = make_initial_state(u0, u1, a, g, dt);
  Field u_pp = st.u_prev; // u^{n-1}
  Field u_p = st.u_curr;  // u^n
  Field u_next(g.size(), 0.0);

  auto snap_wanted = [&](double t) {
    for (double ts : rc.snapshot_times)
      if (std::abs(ts - t) <= 0.5 * dt) return true;
    return false;
  };

  auto emit_row = [&](long n, double e_half, double resid, const Field& u_at_n) {
    double t = n * dt;
    res.trace.times.push_back(t);
    res.trace.e_total.push_back(e_half);
    res.trace.e_local.push_back(local_energy(u_at_n, u_next, dt, g, local_r, spec.box_halfwidth));
    res.trace.l2_sq.push_back(l2_norm_sq(u_at_n, g, pool));
    res.trace.residual.push_back(resid);
    if (rc.cutoff_diagnostic) {
      Field f = cutoff_forcing(u_at_n, phi, g);
      double er1 = local_energy(u_at_n, u_next, dt, g, spec.support_radius, spec.box_halfwidth);
      res.trace.cutoff_ratio.push_back(l2_norm_sq(f, g, pool) / std::max(er1, kEnergyFloor));
    }
  };

  // row at n = 0 from the starting pair (u^0, u^1)
  {
    double e0 = total_energy(u_pp, u_p, dt, g, pool);
    double t0 = 0.0;
    res.trace.times.push_back(t0);
    res.trace.e_total.push_back(e0);
    res.trace.e_local.push_back(local_energy(u_pp, u_p, dt, g, local_r, spec.box_halfwidth));
    res.trace.l2_sq.push_back(l2_norm_sq(u_pp, g, pool));
    res.trace.residual.push_back(0.0);
    if (rc.cutoff_diagnostic) {
      Field f = cutoff_forcing(u_pp, phi, g);
      double er1 = local_energy(u_pp, u_p, dt, g, spec.support_radius, spec.box_halfwidth);
      res.trace.cutoff_ratio.push_back(l2_norm_sq(f, g, pool) / std::max(er1, kEnergyFloor));
    }
    if (snap_wanted(0.0)) res.snapshots.emplace_back(0.0, u_pp);
  }

  double e_half_prev = rc.per_step_dissipation ? total_energy(u_pp, u_p, dt, g, pool) : 0.0;
  if (rc.per_step_dissipation) {
    res.trace.e_step_min = e_half_prev;
    res.trace.e_step_max = e_half_prev;
  }

  for (long n = 1; n < total_levels; ++n) {
    step_into(u_pp, u_p, a, g, dt, u_next, pool);

    bool observe = (n % stride == 0) || (n == total_levels - 1);
    double e_half = 0.0, resid = 0.0;
    if (rc.per_step_dissipation) {
      e_half = total_energy(u_p, u_next, dt, g, pool);
      double diss = dissipation_term(u_pp, u_next, a, dt, g, pool);
      resid = std::abs((e_half - e_half_prev) / dt + diss) / std::max(e_half, kEnergyFloor);
      res.trace.max_residual = std::max(res.trace.max_residual, resid);
      if (e_half > e_half_prev * (1.0 + 1e-12) + 1e-300) res.trace.energy_monotone = false;
      e_half_prev = e_half;
      res.trace.e_step_min = std::min(res.trace.e_step_min, e_half);
      res.trace.e_step_max = std::max(res.trace.e_step_max, e_half);
    } else if (observe) {
      e_half = total_energy(u_p, u_next, dt, g, pool);
      double e_before = total_energy(u_pp, u_p, dt, g, pool);
      double diss = dissipation_term(u_pp, u_next, a, dt, g, pool);
      resid = std::abs((e_half - e_before) / dt + diss) / std::max(e_half, kEnergyFloor);
      res.trace.max_residual = std::max(res.trace.max_residual, resid);
      if (!res.trace.e_total.empty() && e_half > res.trace.e_total.back() * (1.0 + 1e-12) + 1e-300)
        res.trace.energy_monotone = false;
    }
    if (observe) emit_row(n, e_half, resid, u_p);
    if (snap_wanted(n * dt)) res.snapshots.emplace_back(n * dt, u_p);

    std::swap(u_pp, u_p);
    std::swap(u_p, u_next);
  }

  res.final_state.u_prev = std::move(u_pp);
  res.final_state.u_curr = std::move(u_p);
  res.final_state.dt = dt;
  res.final_state.step_index = total_levels - 1;
  return res;
}

namespace {
// one forward-Euler heat step; returns max |v| of the new level
double heat_step(const Field& v, Field& out, const GridMask& g, double mu, ThreadPool* pool) {
  const long nx = g.nx, ny = g.ny;
  const bool two_d = g.dim == 2;
  std::vector<double> row_max(static_cast<std::size_t>(ny), 0.0);
  long row_lo = two_d ? 1 : 0;
  long row_hi = two_d ? ny - 1 : ny;
  parallel_for(pool, row_lo, row_hi, [&](long r0, long r1) {
    for (long iy = r0; iy < r1; ++iy) {
      const double* u0 = v.v.data();
      const NodeKind* kind = g.kind.data();
      double* out_row = out.v.data();
      double mx = 0.0;
      const std::size_t base = static_cast<std::size_t>(iy) * nx;
      for (long ix = 1; ix < nx - 1; ++ix) {
        std::size_t i = base + ix;
        if (kind[i] != NodeKind::Interior) {
          out_row[i] = 0.0;
          continue;
        }
        double lap = u0[i - 1] + u0[i + 1] - 2.0 * u0[i];
        if (two_d) lap += u0[i - nx] + u0[i + nx] - 2.0 * u0[i];
        double val = u0[i] + mu * lap;
        out_row[i] = val;
        mx = std::max(mx, std::abs(val));
      }
      out_row[base] = 0.0;
      out_row[base + nx - 1] = 0.0;
      row_max[static_cast<std::size_t>(iy)] = mx;
    }
  });
  if (two_d) {
    std::fill_n(out.v.begin(), nx, 0.0);
    std::fill_n(out.v.begin() + static_cast<std::size_t>(ny - 1) * nx, nx, 0.0);
  }
  double mx = 0.0;
  for (double m : row_max) mx = std::max(mx, m);
  return mx;
}
} // namespace

HeatRunResult run_heat(const GridMask& g, const Field& v0, double t_end,
                       const std::vector<double>& sample_times, bool keep_snapshots,
                       ThreadPool* pool) {
  if (v0.size() != g.size()) throw Error(Errc::ShapeMismatch, kModule, "v0 does not match grid");
  const double dt = heat_timestep(g.h);
  const double mu = dt / (g.h * g.h);

  // nearest-step matching of the requested sample times
  std::vector<long> targets;
  targets.reserve(sample_times.size());
  for (double t : sample_times) targets.push_back(std::lround(t / dt));
  long last_step = std::max<long>(0, static_cast<long>(std::ceil(t_end / dt)));
  if (!targets.empty()) last_step = std::max(last_step, *std::max_element(targets.begin(), targets.end()));

  HeatRunResult res;
  HeatState st;
  st.v_curr = v0;
  st.dt = dt;
  apply_mask(st.v_curr, g);
  Field& v = st.v_curr;
  Field v_next(g.size(), 0.0);
  double prev_max = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) prev_max = std::max(prev_max, std::abs(v.v[i]));

  auto record = [&](long n, const Field& field) {
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (targets[k] != n) continue;
      res.times.push_back(n * dt);
      res.l2_sq.push_back(l2_norm_sq(field, g, pool));
      double mx = 0.0;
      for (std::size_t i = 0; i < field.size(); ++i) mx = std::max(mx, std::abs(field.v[i]));
      res.max_abs.push_back(mx);
      if (keep_snapshots) res.snapshots.emplace_back(n * dt, field);
    }
  };

  record(0, v);
  for (long n = 1; n <= last_step; ++n) {
    double mx = heat_step(v, v_next, g, mu, pool);
    if (mx > prev_max * (1.0 + 1e-12)) res.max_monotone = false;
    if (mx > kBlowup)
      throw Error(Errc::Blowup, kModule, "heat run exceeded 1e12; check step size");
    prev_max = mx;
    std::swap(v, v_next);
    st.time = n * dt;
    record(n, v);
  }
  return res;
}

GapTrace diffusion_gap(const std::vector<std::pair<double, Field>>& wave_snapshots,
                       const std::vector<std::pair<double, Field>>& heat_snapshots,
                       const GridMask& g) {
  if (wave_snapshots.size() != heat_snapshots.size())
    throw Error(Errc::ShapeMismatch, kModule, "snapshot lists differ in length");
  GapTrace out;
  for (std::size_t k = 0; k < wave_snapshots.size(); ++k) {
    const auto& [tu, u] = wave_snapshots[k];
    const auto& [tv, v] = heat_snapshots[k];
    if (u.size() != g.size() || v.size() != g.size())
      throw Error(Errc::ShapeMismatch, kModule, "snapshot does not match grid");
    if (std::abs(tu - tv) > 0.05 * (1.0 + std::abs(tu)))
      throw Error(Errc::ShapeMismatch, kModule, "snapshot times are not matched");
    Field diff(g.size(), 0.0);
    for (std::size_t i = 0; i < diff.size(); ++i) diff.v[i] = u.v[i] - v.v[i];
    out.times.push_back(tu);
    out.gap.push_back(std::sqrt(l2_norm_sq(diff, g)));
  }
  return out;
}

HeatCompareResult compare_heat(const DomainSpec& spec, const GridMask& g, const Field& a,
                               const Field& u0, const Field& u1, double t_end,
                               long observer_stride, ThreadPool* pool) {
  const double dt = cfl_timestep(g.h, g.dim);
  const long stride =
      observer_stride > 0 ? observer_stride : static_cast<long>(std::ceil(0.5 / dt));
  const long total_levels = std::max<long>(2, static_cast<long>(std::ceil(t_end / dt)));
  (void)spec;

  Field v0(g.size(), 0.0);
  for (std::size_t i = 0; i < v0.size(); ++i) v0.v[i] = u0.v[i] + u1.v[i];
  apply_mask(v0, g);

  const double dth = heat_timestep(g.h);
  const double mu = dth / (g.h * g.h);
  Field v = v0, v_next(g.size(), 0.0);
  long heat_step_idx = 0;

  SolverState st = make_initial_state(u0, u1, a, g, dt);
  Field u_pp = st.u_prev, u_p = st.u_curr, u_next(g.size(), 0.0);

  HeatCompareResult res;
  auto observe = [&](long n, const Field& u_at_n) {
    double t = n * dt;
    long target = std::lround(t / dth);
    while (heat_step_idx < target) {
      heat_step(v, v_next, g, mu, pool);
      std::swap(v, v_next);
      ++heat_step_idx;
    }
    Field diff(g.size(), 0.0);
    for (std::size_t i = 0; i < diff.size(); ++i) diff.v[i] = u_at_n.v[i] - v.v[i];
    res.times.push_back(t);
    res.norm_u.push_back(std::sqrt(l2_norm_sq(u_at_n, g, pool)));
    res.norm_v.push_back(std::sqrt(l2_norm_sq(v, g, pool)));
    res.gap.push_back(std::sqrt(l2_norm_sq(diff, g, pool)));
  };

  observe(0, u_pp);
  for (long n = 1; n < total_levels; ++n) {
    step_into(u_pp, u_p, a, g, dt, u_next, pool);
    if (n % stride == 0 || n == total_levels - 1) observe(n, u_p);
    std::swap(u_pp, u_p);
    std::swap(u_p, u_next);
  }
  return res;
}

} // namespace declab
