#include "declab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "declab/io.hpp"
#include "declab/metrics.hpp"
#include "declab/ray.hpp"
#include "declab/resolvent.hpp"
#include "declab/wave.hpp"

namespace declab {

namespace {

using Status = CriterionResult::Status;

class Stopwatch {
public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

private:
  std::chrono::steady_clock::time_point t0_;
};

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

template <typename Fn>
CriterionResult run_criterion(int id, const std::string& name, double budget_s, Fn&& fn) {
  CriterionResult row;
  row.id = id;
  row.name = name;
  Stopwatch sw;
  try {
    fn(row);
  } catch (const Error& e) {
    row.status = Status::Fail;
    row.note = e.what();
  } catch (const std::exception& e) {
    row.status = Status::Fail;
    row.note = e.what();
  }
  row.elapsed_s = sw.elapsed();
  if (budget_s > 0.0 && row.status == Status::Pass && row.elapsed_s > budget_s) {
    row.status = Status::Fail;
    row.note += " [runtime " + fmt3(row.elapsed_s) + "s over budget " + fmt3(budget_s) + "s]";
  }
  return row;
}

struct WaveRun {
  EnergyTrace trace;
};

EnergyTrace run_trace(const ExperimentConfig& c, bool per_step, bool zero_damper,
                      ThreadPool* pool) {
  DomainSpec dom = c.domain_spec();
  GridMask g = build_grid(dom);
  Field a = zero_damper ? Field(g.size(), 0.0) : sample_damper(c.damper_spec(), dom, g);
  auto [u0, u1] = initial_data(c.bump_spec(), dom, g);
  RunConfig rc;
  rc.t_end = c.t_end;
  rc.cfl_safety = c.cfl_safety;
  rc.observer_stride = c.observer_stride;
  rc.local_radius = c.resolved_local_radius();
  rc.per_step_dissipation = per_step;
  rc.cutoff_diagnostic = c.cutoff_diagnostic;
  return run_wave(dom, g, a, u0, u1, rc, pool).trace;
}

GccReport scenario_gcc(const ExperimentConfig& c, ThreadPool* pool) {
  DomainSpec dom = c.domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(c.damper_spec(), dom, g);
  GccSampling s{c.gcc.n_pos, c.gcc.n_dir, c.gcc.t_max, c.gcc.eps_omega, c.seed};
  return check_gcc(a, dom, g, s, pool);
}

// Two-disk trap with the damper zeroed along the connecting segment. The
// periodic ray on the axis never meets { a > eps }.
ExperimentConfig trap_config(const ExperimentConfig& base) {
  ExperimentConfig t = base;
  t.scenario = "two-disk-trap";
  t.dimension = 2;
  t.obstacles = {{-2.0, 0.0, 0.5}, {2.0, 0.0, 0.5}};
  t.damper_radius = 3.0;
  t.support_radius = 3.5;
  t.box_halfwidth = 6.0;
  t.spacing = 0.1;
  t.damper_kind = "exterior_with_hole";
  t.damper_hole = {-2.0, 2.0, -0.2, 0.2};
  t.bump_cx = 0.0;
  t.bump_cy = 1.5;
  t.bump_width = 0.5;
  t.t_end = 10.0;
  return t;
}

ExperimentConfig mini_config(const ExperimentConfig& base) {
  ExperimentConfig m = base;
  m.scenario = "determinism-mini";
  m.dimension = 2;
  m.obstacles = {{0.0, 0.0, 0.5}};
  m.damper_radius = 2.0;
  m.support_radius = 3.0;
  m.box_halfwidth = 8.0;
  m.spacing = 0.2;
  m.damper_kind = "exterior_smooth";
  m.damper_inner_radius = 1.0;
  m.initial_kind = "bump_both";
  m.bump_cx = 1.5;
  m.bump_cy = 0.0;
  m.bump_width = 0.5;
  m.t_end = 10.0;
  m.observer_stride = 0;
  m.resolvent.box_halfwidth = 4.0;
  m.resolvent.spacing = 0.1;
  m.resolvent.intermediate = {0.5, 2.0, 6};
  m.resolvent.high = {3.0, 8.0, 6};
  return m;
}

// Everything the determinism row compares, produced exactly like the real
// emission paths.
std::vector<std::pair<std::string, std::string>> mini_artifacts(const ExperimentConfig& m,
                                                                ThreadPool* pool) {
  std::vector<std::pair<std::string, std::string>> files;
  EnergyTrace tr = run_trace(m, false, false, pool);
  files.emplace_back("trace.csv", trace_csv(tr));

  DomainSpec rdom = m.resolvent_domain_spec();
  GridMask rg = build_grid(rdom);
  Field ra = sample_damper(m.damper_spec(), rdom, rg);
  auto inter = sweep_band(rg, rdom, ra, m.resolvent.intermediate, m.rhs_family(), m.seed,
                          m.resolvent.tolerance, pool);
  files.emplace_back("sweep.csv", sweep_csv(inter));

  DomainSpec dom = m.domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(m.damper_spec(), dom, g);
  GccSampling s{50, 16, m.gcc.t_max, m.gcc.eps_omega, m.seed};
  files.emplace_back("gcc.json", gcc_json(check_gcc(a, dom, g, s, pool)));
  return files;
}

} // namespace

VerifyResult run_verify(const ExperimentConfig& cfg, const VerifyOptions& opt) {
  VerifyResult result;
  ThreadPool pool(std::max(1, opt.threads));
  ThreadPool* pl = &pool;

  auto wanted = [&](int id) {
    if (opt.only.empty()) return true;
    return std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end();
  };
  auto add = [&](CriterionResult row) { result.rows.push_back(std::move(row)); };

  OutputWriter* out = nullptr;
  OutputWriter writer(opt.out_dir.empty() ? cfg.out_dir : opt.out_dir, config_hash(cfg));
  if (opt.emit_files) out = &writer;

  // ---- 1: per-step dissipation identity and undamped conservation --------
  if (wanted(1))
  add(run_criterion(1, "dissipation-identity", 120.0, [&](CriterionResult& r) {
    ExperimentConfig c1 = cfg;
    c1.box_halfwidth = 30.0;
    c1.spacing = 0.1;
    c1.t_end = 50.0;
    EnergyTrace damped = run_trace(c1, true, false, nullptr); // single-threaded by design
    EnergyTrace undamped = run_trace(c1, true, true, nullptr);
    double drift = undamped.e_step_max > 0.0
                       ? (undamped.e_step_max - undamped.e_step_min) / undamped.e_step_max
                       : 0.0;
    if (out) {
      out->emit("c01_dissipation/trace.csv", trace_csv(damped));
      out->emit("c01_dissipation/trace_undamped.csv", trace_csv(undamped));
    }
    bool ok = damped.max_residual <= 1e-10 && undamped.max_residual <= 1e-10 && drift <= 1e-10;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "max residual " + fmt3(std::max(damped.max_residual, undamped.max_residual)) +
             ", undamped drift " + fmt3(drift);
  }));

  // ---- 2: free space, a == 1, known decay rates ---------------------------
  if (wanted(2))
  add(run_criterion(2, "free-space-decay-rates", 600.0, [&](CriterionResult& r) {
    ExperimentConfig c2 = cfg;
    c2.scenario = "free-space";
    c2.dimension = 2;
    c2.obstacles.clear();
    c2.damper_kind = "constant_one";
    c2.box_halfwidth = 0.0; // auto
    c2.spacing = 0.1;
    c2.t_end = 200.0;
    EnergyTrace tr = run_trace(c2, false, false, pl);
    DecayFit fit_l2 = fit_decay(tr.times, tr.l2_sq, 20.0, 180.0);
    DecayFit fit_e = fit_decay(tr.times, tr.e_total, 20.0, 180.0);
    if (out) {
      out->emit("c02_free_space/trace.csv", trace_csv(tr));
      out->emit("c02_free_space/fit_l2.json", fit_json(fit_l2));
      out->emit("c02_free_space/fit_energy.json", fit_json(fit_e));
    }
    bool ok = fit_l2.exponent >= 0.7 && fit_l2.exponent <= 1.4 && fit_e.exponent >= 1.5 &&
              fit_e.exponent <= 2.6 && fit_l2.r2 >= 0.98 && fit_e.r2 >= 0.98;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "l2 exp " + fmt3(fit_l2.exponent) + " (R2 " + fmt3(fit_l2.r2) + "), E exp " +
             fmt3(fit_e.exponent) + " (R2 " + fmt3(fit_e.r2) + ")";
  }));

  // ---- 3/4/5 share the exterior-disk decay run ----------------------------
  GccReport gcc_rep;
  bool gcc_done = false;
  EnergyTrace decay_trace;
  bool decay_done = false;

  if (wanted(3))
  add(run_criterion(3, "local-energy-decay", 900.0, [&](CriterionResult& r) {
    gcc_rep = scenario_gcc(cfg, pl);
    gcc_done = true;
    if (out) out->emit("c03_local_decay/gcc.json", gcc_json(gcc_rep));
    decay_trace = run_trace(cfg, false, false, pl);
    decay_done = true;
    if (out) out->emit("c03_local_decay/trace.csv", trace_csv(decay_trace));
    if (!gcc_rep.satisfied) {
      r.status = Status::Skipped;
      r.note = "GCC_FAIL";
      return;
    }
    DecayFit fit = fit_decay(decay_trace.times, decay_trace.e_local, cfg.resolved_fit_t_min(),
                             cfg.resolved_fit_t_max());
    if (out) out->emit("c03_local_decay/fit_local.json", fit_json(fit));
    bool ok = fit.exponent >= 1.6 && fit.r2 >= 0.95;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "E_r1 exp " + fmt3(fit.exponent) + " (R2 " + fmt3(fit.r2) + "), T0 " +
             fmt3(gcc_rep.t0_estimate);
  }));

  if (wanted(4))
  add(run_criterion(4, "total-energy-decay", 0.0, [&](CriterionResult& r) {
    if (!decay_done) {
      r.status = Status::Fail;
      r.note = "decay run unavailable";
      return;
    }
    if (gcc_done && !gcc_rep.satisfied) {
      r.status = Status::Skipped;
      r.note = "GCC_FAIL";
      return;
    }
    DecayFit fit_l2 = fit_decay(decay_trace.times, decay_trace.l2_sq, cfg.resolved_fit_t_min(),
                                cfg.resolved_fit_t_max());
    DecayFit fit_e = fit_decay(decay_trace.times, decay_trace.e_total, cfg.resolved_fit_t_min(),
                               cfg.resolved_fit_t_max());
    if (out) {
      out->emit("c04_total_decay/fit_l2.json", fit_json(fit_l2));
      out->emit("c04_total_decay/fit_energy.json", fit_json(fit_e));
    }
    bool ok = fit_l2.exponent >= 0.8 && fit_e.exponent >= 1.2;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "l2 exp " + fmt3(fit_l2.exponent) + ", E exp " + fmt3(fit_e.exponent) +
             " (theta target " + fmt3(theta_exponent(cfg.dimension)) + ")";
  }));

  if (wanted(5))
  add(run_criterion(5, "box-doubling-certificate", 1800.0,
                                      [&](CriterionResult& r) {
    if (!decay_done) {
      r.status = Status::Fail;
      r.note = "decay run unavailable";
      return;
    }
    ExperimentConfig cbig = cfg;
    cbig.box_halfwidth = 2.0 * cfg.resolved_box_halfwidth();
    EnergyTrace big = run_trace(cbig, false, false, pl);
    if (out) out->emit("c05_box_doubling/trace_doubled.csv", trace_csv(big));
    std::size_t n = std::min(decay_trace.size(), big.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double denom = std::max(decay_trace.e_total[i], 1e-300);
      worst = std::max(worst, std::abs(big.e_total[i] - decay_trace.e_total[i]) / denom);
    }
    bool ok = n >= 10 && worst <= 0.01;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "max relative E change " + fmt3(worst) + " over " + std::to_string(n) + " times";
  }));

  // ---- 6/7: resolvent sweeps and the quadratic-form identity --------------
  SweepReport sweep_rep;
  bool sweep_done = false;

  if (wanted(6))
  add(run_criterion(6, "resolvent-sweeps", 600.0, [&](CriterionResult& r) {
    DomainSpec rdom = cfg.resolvent_domain_spec();
    GridMask rg = build_grid(rdom);
    Field ra = sample_damper(cfg.damper_spec(), rdom, rg);
    const double tol = cfg.resolvent.tolerance;
    sweep_rep.intermediate = sweep_band(rg, rdom, ra, cfg.resolvent.intermediate,
                                        cfg.rhs_family(), cfg.seed, tol, pl);
    sweep_rep.high =
        sweep_band(rg, rdom, ra, cfg.resolvent.high, cfg.rhs_family(), cfg.seed, tol, pl);
    for (const auto& s : sweep_rep.intermediate) {
      sweep_rep.all_converged = sweep_rep.all_converged && s.converged && s.residual <= tol;
      sweep_rep.sup_h1_intermediate = std::max(sweep_rep.sup_h1_intermediate, s.h1_ratio);
    }
    double low_max = 0.0, top_max = 0.0;
    const auto& hb = cfg.resolvent.high;
    for (const auto& s : sweep_rep.high) {
      sweep_rep.all_converged = sweep_rep.all_converged && s.converged && s.residual <= tol;
      sweep_rep.sup_hf_high = std::max(sweep_rep.sup_hf_high, s.hf_ratio);
      if (s.s <= 2.0 * hb.s_min) low_max = std::max(low_max, s.hf_ratio);
      if (s.s >= 0.5 * hb.s_max) top_max = std::max(top_max, s.hf_ratio);
    }
    sweep_done = true;
    if (out) {
      out->emit("c06_sweeps/sweep_intermediate.csv", sweep_csv(sweep_rep.intermediate));
      out->emit("c06_sweeps/sweep_high.csv", sweep_csv(sweep_rep.high));
      out->emit("c06_sweeps/summary.json", sweep_summary_json(sweep_rep));
    }
    bool ok = sweep_rep.all_converged && std::isfinite(sweep_rep.sup_h1_intermediate) &&
              low_max > 0.0 && top_max <= 1.2 * low_max;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "sup h1 " + fmt3(sweep_rep.sup_h1_intermediate) + ", hf max [" + fmt3(hb.s_min) +
             "," + fmt3(2.0 * hb.s_min) + "] " + fmt3(low_max) + " vs [" + fmt3(0.5 * hb.s_max) +
             "," + fmt3(hb.s_max) + "] " + fmt3(top_max);
  }));

  if (wanted(7))
  add(run_criterion(7, "quadratic-form-identity", 0.0,
                                      [&](CriterionResult& r) {
    if (!sweep_done) {
      r.status = Status::Fail;
      r.note = "sweep unavailable";
      return;
    }
    const double tol = cfg.resolvent.tolerance;
    double worst = 0.0;
    long checked = 0;
    for (const auto* band : {&sweep_rep.intermediate, &sweep_rep.high}) {
      for (const auto& s : *band) {
        if (!s.converged) continue;
        double bound = 10.0 * tol * s.norm_f * s.norm_w;
        worst = std::max(worst, s.quadform_resid / std::max(bound, 1e-300));
        ++checked;
      }
    }
    bool ok = checked > 0 && worst <= 1.0;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "max residual at " + fmt3(worst * 100.0) + "% of the 10*tol bound, " +
             std::to_string(checked) + " solves";
  }));

  // ---- 8: convolution-bound quadrature ------------------------------------
  if (wanted(8))
  add(run_criterion(8, "convolution-bound-quadrature", 60.0,
                                      [&](CriterionResult& r) {
    const double pairs[3][2] = {{2.0, 1.5}, {1.25, 3.0}, {0.5, 1.5}};
    std::ostringstream csv;
    csv << "a,b,t,ratio\n";
    bool ok = true;
    std::string worst_note;
    for (const auto& ab : pairs) {
      double decade_max[4] = {0, 0, 0, 0};
      for (int e4 = 0; e4 <= 16; ++e4) {
        double t = std::pow(10.0, e4 / 4.0);
        double ratio = conv_bound_ratio(ab[0], ab[1], t);
        csv << fmt3(ab[0]) << ',' << fmt3(ab[1]) << ',' << t << ',' << ratio << "\n";
        if (!std::isfinite(ratio)) ok = false;
        int dec = std::max(0, std::min((e4 - 1) / 4, 3)); // decades (10^d, 10^{d+1}]
        decade_max[dec] = std::max(decade_max[dec], ratio);
      }
      // growth beyond t=100: decade (1e3,1e4] vs (1e2,1e3]
      if (decade_max[3] > 1.05 * decade_max[2]) ok = false;
      worst_note += " (" + fmt3(ab[0]) + "," + fmt3(ab[1]) + "): " +
                    fmt3(decade_max[3] / decade_max[2]);
    }
    if (out) out->emit("c08_convolution/ratios.csv", csv.str());
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "last/prev decade max ratios" + worst_note;
  }));

  // ---- 9: diffusion phenomenon --------------------------------------------
  if (wanted(9))
  add(run_criterion(9, "diffusion-phenomenon", 0.0, [&](CriterionResult& r) {
    ExperimentConfig c9 = cfg;
    c9.scenario = "free-space-diffusion";
    c9.dimension = 2;
    c9.obstacles.clear();
    c9.damper_kind = "constant_one";
    c9.box_halfwidth = 0.0;
    c9.spacing = 0.1;
    c9.t_end = 100.0;
    DomainSpec dom = c9.domain_spec();
    GridMask g = build_grid(dom);
    Field a = sample_damper(c9.damper_spec(), dom, g);
    auto [u0, u1] = initial_data(c9.bump_spec(), dom, g);
    HeatCompareResult cmp = compare_heat(dom, g, a, u0, u1, c9.t_end, 0, pl);
    DecayFit fit_gap = fit_decay(cmp.times, cmp.gap, 10.0, 90.0);
    DecayFit fit_u = fit_decay(cmp.times, cmp.norm_u, 10.0, 90.0);
    if (out) {
      out->emit("c09_diffusion/compare.csv", compare_csv(cmp));
      out->emit("c09_diffusion/fit_gap.json", fit_json(fit_gap));
      out->emit("c09_diffusion/fit_u.json", fit_json(fit_u));
    }
    bool ok = fit_gap.exponent - fit_u.exponent >= 0.3;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = "gap exp " + fmt3(fit_gap.exponent) + " vs |u| exp " + fmt3(fit_u.exponent);
  }));

  // ---- 10: GCC certifier ---------------------------------------------------
  if (wanted(10))
  add(run_criterion(10, "gcc-certifier", 60.0, [&](CriterionResult& r) {
    GccReport rep_scenario = gcc_done ? gcc_rep : scenario_gcc(cfg, pl);

    ExperimentConfig trap = trap_config(cfg);
    DomainSpec tdom = trap.domain_spec();
    GridMask tg = build_grid(tdom);
    Field ta = sample_damper(trap.damper_spec(), tdom, tg);
    GccSampling ts{cfg.gcc.n_pos, cfg.gcc.n_dir, cfg.gcc.t_max, cfg.gcc.eps_omega, cfg.seed};
    GccReport rep_trap = check_gcc(ta, tdom, tg, ts, pl);

    ExperimentConfig cone = trap;
    cone.damper_kind = "constant_one";
    Field ca = sample_damper(cone.damper_spec(), tdom, tg);
    GccReport rep_const = check_gcc(ca, tdom, tg, ts, pl);

    if (out) {
      out->emit("c10_gcc/gcc_scenario.json", gcc_json(rep_scenario));
      out->emit("c10_gcc/gcc_scenario.txt", gcc_text(rep_scenario));
      out->emit("c10_gcc/gcc_trap.json", gcc_json(rep_trap));
      out->emit("c10_gcc/gcc_constant.json", gcc_json(rep_const));
    }
    bool trap_axis = std::abs(rep_trap.worst_ray.py) <= 2.0 * tg.h;
    bool ok = rep_scenario.satisfied && !rep_trap.satisfied && trap_axis &&
              rep_const.satisfied && rep_const.t0_estimate == 0.0;
    r.status = ok ? Status::Pass : Status::Fail;
    r.note = std::string("scenario ") + (rep_scenario.satisfied ? "ok" : "BAD") + ", trap " +
             (!rep_trap.satisfied ? "caught" : "MISSED") + " (|y| " +
             fmt3(std::abs(rep_trap.worst_ray.py)) + "), const T0 " +
             fmt3(rep_const.t0_estimate);
  }));

  // ---- 11: 1D resolvent eigen-oracle ---------------------------------------
  if (wanted(11))
  add(run_criterion(11, "resolvent-1d-oracle", 0.0, [&](CriterionResult& r) {
    DomainSpec dom;
    dom.dim = 1;
    dom.box_halfwidth = 5.0;
    dom.spacing = 0.1;
    dom.damper_radius = 2.0;
    dom.support_radius = 3.0;
    GridMask g = build_grid(dom);
    DamperSpec ds;
    ds.kind = DamperKind::ConstantOne;
    Field a = sample_damper(ds, dom, g);
    const double L = 2.0 * dom.box_halfwidth;
    double worst = 0.0;
    std::ostringstream csv;
    csv << "k,s,rel_error\n";
    for (int k : {1, 2, 5}) {
      for (double s : {0.5, 2.0, 10.0}) {
        Field F(g.size(), 0.0);
        for (long ix = 1; ix < g.nx - 1; ++ix)
          F.v[g.at(ix, 0)] = std::sin(k * M_PI * (ix * g.h) / L);
        double lam = 4.0 / (g.h * g.h) * std::pow(std::sin(k * M_PI * g.h / (2.0 * L)), 2);
        cplx denom = cplx(lam - s * s, s);
        HelmholtzSystem sys = assemble(g, a, s);
        CField w = solve(sys, F, 1e-12);
        double num = 0.0, den = 0.0;
        for (long ix = 0; ix < g.nx; ++ix) {
          cplx exact = F.v[g.at(ix, 0)] / denom;
          num += std::norm(w.v[g.at(ix, 0)] - exact);
          den += std::norm(exact);
        }
        double rel = std::sqrt(num / den);
        worst = std::max(worst, rel);
        csv << k << ',' << s << ',' << rel << "\n";
      }
    }
    if (out) out->emit("c11_oracle/errors.csv", csv.str());
    r.status = worst <= 1e-9 ? Status::Pass : Status::Fail;
    r.note = "max relative error " + fmt3(worst);
  }));

  // ---- 12: determinism ------------------------------------------------------
  if (wanted(12))
  add(run_criterion(12, "determinism", 0.0, [&](CriterionResult& r) {
    ExperimentConfig m = mini_config(cfg);
    auto run_a = mini_artifacts(m, pl);
    auto run_b = mini_artifacts(m, pl);
    bool identical = run_a.size() == run_b.size();
    for (std::size_t i = 0; identical && i < run_a.size(); ++i)
      identical = run_a[i].second == run_b[i].second;
    if (out) {
      for (const auto& [name, content] : run_a) out->emit("c12_determinism/run_a/" + name, content);
      for (const auto& [name, content] : run_b) out->emit("c12_determinism/run_b/" + name, content);
    }
    r.status = identical ? Status::Pass : Status::Fail;
    r.note = identical ? "byte-identical outputs across repeated runs" : "outputs differ";
  }));

  if (out) {
    out->emit("verify.txt", verify_table(result));
    out->finish();
  }
  return result;
}

std::string verify_table(const VerifyResult& r) {
  std::ostringstream o;
  o << "acceptance suite\n";
  o << "----------------------------------------------------------------------\n";
  for (const auto& row : r.rows) {
    const char* st = row.status == Status::Pass      ? "PASS"
                     : row.status == Status::Skipped ? "SKIPPED"
                                                     : "FAIL";
    char head[64];
    std::snprintf(head, sizeof head, "%2d %-28s %-8s %7.1fs  ", row.id, row.name.c_str(), st,
                  row.elapsed_s);
    o << head << row.note << "\n";
  }
  o << "----------------------------------------------------------------------\n";
  o << (r.all_ok() ? "RESULT: PASS" : "RESULT: FAIL") << "\n";
  return o.str();
}

} // namespace declab
