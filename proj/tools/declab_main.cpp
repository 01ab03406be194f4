#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "declab/config.hpp"
#include "declab/io.hpp"
#include "declab/metrics.hpp"
#include "declab/ray.hpp"
#include "declab/resolvent.hpp"
#include "declab/verify.hpp"
#include "declab/wave.hpp"

namespace {

using namespace declab;

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

ExperimentConfig load_with_overrides(const GlobalArgs& g) {
  ExperimentConfig cfg = load_config(g.config_path);
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

int cmd_simulate(const GlobalArgs& ga) {
  ExperimentConfig cfg = load_with_overrides(ga);
  ThreadPool pool(ga.threads);
  DomainSpec dom = cfg.domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(cfg.damper_spec(), dom, g);
  auto [u0, u1] = initial_data(cfg.bump_spec(), dom, g);

  GccSampling gs{cfg.gcc.n_pos, cfg.gcc.n_dir, cfg.gcc.t_max, cfg.gcc.eps_omega, cfg.seed};
  GccReport gcc = check_gcc(a, dom, g, gs, &pool);
  if (!gcc.satisfied)
    std::cerr << "warning: damper fails the geometric control check; decay-rate "
                 "claims do not apply to this run\n";

  RunConfig rc;
  rc.t_end = cfg.t_end;
  rc.cfl_safety = cfg.cfl_safety;
  rc.observer_stride = cfg.observer_stride;
  rc.local_radius = cfg.resolved_local_radius();
  rc.per_step_dissipation = cfg.per_step_dissipation;
  rc.cutoff_diagnostic = cfg.cutoff_diagnostic;
  rc.snapshot_times = cfg.snapshot_times;
  RunResult run = run_wave(dom, g, a, u0, u1, rc, &pool);

  OutputWriter out(cfg.out_dir, config_hash(cfg));
  out.emit("config.cfg", serialize_config(cfg));
  out.emit("trace.csv", trace_csv(run.trace));
  out.emit("gcc.json", gcc_json(gcc));
  double t_min = cfg.resolved_fit_t_min(), t_max = cfg.resolved_fit_t_max();
  try {
    out.emit("fit_l2.json", fit_json(fit_decay(run.trace.times, run.trace.l2_sq, t_min, t_max)));
    out.emit("fit_energy.json",
             fit_json(fit_decay(run.trace.times, run.trace.e_total, t_min, t_max)));
    out.emit("fit_local.json",
             fit_json(fit_decay(run.trace.times, run.trace.e_local, t_min, t_max)));
  } catch (const Error& e) {
    std::cerr << "warning: decay fit skipped: " << e.what() << "\n";
  }
  if (rc.cutoff_diagnostic) out.emit("cutoff.csv", cutoff_csv(run.trace));
  for (const auto& [t, f] : run.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_t%08.3f.bin", t);
    out.emit(name, snapshot_blob(f, g, t));
  }
  out.finish();
  std::cout << "simulate: " << run.trace.size() << " observer rows, E(0) = "
            << run.trace.e_total.front() << ", E(end) = " << run.trace.e_total.back()
            << ", max dissipation residual = " << run.trace.max_residual << "\n"
            << "outputs in " << out.dir() << "\n";
  return 0;
}

int cmd_sweep(const GlobalArgs& ga) {
  ExperimentConfig cfg = load_with_overrides(ga);
  ThreadPool pool(ga.threads);
  DomainSpec dom = cfg.resolvent_domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(cfg.damper_spec(), dom, g);

  SweepReport rep;
  rep.intermediate = sweep_band(g, dom, a, cfg.resolvent.intermediate, cfg.rhs_family(),
                                cfg.seed, cfg.resolvent.tolerance, &pool);
  rep.high = sweep_band(g, dom, a, cfg.resolvent.high, cfg.rhs_family(), cfg.seed,
                        cfg.resolvent.tolerance, &pool);
  for (const auto& s : rep.intermediate) {
    rep.all_converged = rep.all_converged && s.converged;
    rep.sup_h1_intermediate = std::max(rep.sup_h1_intermediate, s.h1_ratio);
  }
  for (const auto& s : rep.high) {
    rep.all_converged = rep.all_converged && s.converged;
    rep.sup_hf_high = std::max(rep.sup_hf_high, s.hf_ratio);
  }
  if (cfg.resolvent.probe) {
    auto [f1, f2] = initial_data(cfg.bump_spec(), dom, g);
    double chi = cfg.resolvent.probe_chi_radius > 0.0 ? cfg.resolvent.probe_chi_radius
                                                      : cfg.support_radius + 1.0;
    rep.low_freq = low_freq_probe(g, dom, a, f1, f2, cfg.resolvent.probe_betas,
                                  cfg.resolvent.probe_n_s, cfg.resolvent.probe_delta, chi,
                                  cfg.resolvent.tolerance, &pool);
  }

  OutputWriter out(cfg.out_dir, config_hash(cfg));
  out.emit("config.cfg", serialize_config(cfg));
  out.emit("sweep_intermediate.csv", sweep_csv(rep.intermediate));
  out.emit("sweep_high.csv", sweep_csv(rep.high));
  if (!rep.low_freq.samples.empty()) {
    std::string csv = "beta,s,energy_norm,converged\n";
    for (const auto& p : rep.low_freq.samples)
      csv += std::to_string(p.beta) + "," + std::to_string(p.s) + "," +
             std::to_string(p.energy_norm) + "," + (p.converged ? "1" : "0") + "\n";
    out.emit("low_freq_probe.csv", csv);
  }
  out.emit("summary.json", sweep_summary_json(rep));
  out.finish();
  std::cout << sweep_summary_json(rep) << "outputs in " << out.dir() << "\n";
  // stagnated samples are reported in the summary, not an error exit
  return 0;
}

int cmd_check_gcc(const GlobalArgs& ga) {
  ExperimentConfig cfg = load_with_overrides(ga);
  ThreadPool pool(ga.threads);
  DomainSpec dom = cfg.domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(cfg.damper_spec(), dom, g);
  GccSampling gs{cfg.gcc.n_pos, cfg.gcc.n_dir, cfg.gcc.t_max, cfg.gcc.eps_omega, cfg.seed};
  GccReport rep = cfg.gcc.escape_radius > 0.0
                      ? check_egc(a, dom, g, gs, cfg.gcc.escape_radius, &pool)
                      : check_gcc(a, dom, g, gs, &pool);
  OutputWriter out(cfg.out_dir, config_hash(cfg));
  out.emit("gcc.json", gcc_json(rep));
  out.emit("gcc.txt", gcc_text(rep));
  out.finish();
  std::cout << gcc_text(rep);
  return 0;
}

int cmd_compare_heat(const GlobalArgs& ga) {
  ExperimentConfig cfg = load_with_overrides(ga);
  ThreadPool pool(ga.threads);
  DomainSpec dom = cfg.domain_spec();
  GridMask g = build_grid(dom);
  Field a = sample_damper(cfg.damper_spec(), dom, g);
  auto [u0, u1] = initial_data(cfg.bump_spec(), dom, g);
  HeatCompareResult cmp =
      compare_heat(dom, g, a, u0, u1, cfg.t_end, cfg.observer_stride, &pool);

  OutputWriter out(cfg.out_dir, config_hash(cfg));
  out.emit("config.cfg", serialize_config(cfg));
  out.emit("compare.csv", compare_csv(cmp));
  double t_min = cfg.resolved_fit_t_min(), t_max = cfg.resolved_fit_t_max();
  std::string msg;
  try {
    DecayFit fg = fit_decay(cmp.times, cmp.gap, t_min, t_max);
    DecayFit fu = fit_decay(cmp.times, cmp.norm_u, t_min, t_max);
    out.emit("fit_gap.json", fit_json(fg));
    out.emit("fit_u.json", fit_json(fu));
    msg = "gap exponent " + std::to_string(fg.exponent) + ", |u| exponent " +
          std::to_string(fu.exponent);
  } catch (const Error& e) {
    msg = std::string("fit skipped: ") + e.what();
  }
  out.finish();
  std::cout << "compare-heat: " << cmp.times.size() << " samples; " << msg << "\noutputs in "
            << out.dir() << "\n";
  return 0;
}

int cmd_verify(const GlobalArgs& ga) {
  ExperimentConfig cfg = load_with_overrides(ga);
  VerifyOptions opt;
  opt.threads = ga.threads;
  VerifyResult res = run_verify(cfg, opt);
  std::cout << verify_table(res);
  return res.all_ok() ? 0 : 3;
}

int cmd_fit(const GlobalArgs& ga, const std::string& input, const std::string& column,
            double t_min, double t_max, const std::string& out_path) {
  CsvTable tab = parse_csv(read_file(input));
  std::vector<double> t = tab.column("t");
  std::vector<double> y = tab.column(column);
  if (t_min == 0.0 && t_max == 0.0 && !ga.config_path.empty()) {
    ExperimentConfig cfg = load_with_overrides(ga);
    t_min = cfg.resolved_fit_t_min();
    t_max = cfg.resolved_fit_t_max();
  }
  if (t_max == 0.0 && !t.empty()) t_max = t.back();
  DecayFit f = fit_decay(t, y, t_min, t_max);
  std::string j = fit_json(f);
  if (!out_path.empty()) write_file(out_path, j);
  std::cout << j;
  return 0;
}

int cmd_plot(const std::string& input, const std::string& x_col, std::string y_cols,
             bool log_log, const std::string& title, const std::string& out_path) {
  CsvTable tab = parse_csv(read_file(input));
  if (tab.cells.empty())
    throw Error(Errc::PlotError, "cli-harness", "no data rows in " + input);
  std::vector<double> x = tab.column(x_col);
  std::vector<PlotSeries> series;
  std::string label;
  std::istringstream ys(y_cols);
  while (std::getline(ys, label, ',')) {
    if (label.empty()) continue;
    series.push_back({label, x, tab.column(label)});
  }
  if (series.empty()) throw Error(Errc::PlotError, "cli-harness", "no y columns requested");
  std::string svg = plot_svg(series, title.empty() ? input : title, x_col,
                             series.size() == 1 ? series[0].label : "value", log_log);
  write_file(out_path, svg);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"declab: damped-wave decay laboratory on truncated exterior domains"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand name

  GlobalArgs ga;
  app.add_option("--config", ga.config_path, "experiment config file");
  app.add_option("--out", ga.out_dir, "output directory (overrides config)");
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "RNG seed (overrides config)");
  app.add_option("--threads", ga.threads, "worker threads")->default_val(1);

  auto* sim = app.add_subcommand("simulate", "time-domain damped wave run with observers");
  auto* swp = app.add_subcommand("sweep-resolvent", "frequency sweeps of the reduced equation");
  auto* gcc = app.add_subcommand("check-gcc", "certify geometric control of the damper");
  auto* cmp = app.add_subcommand("compare-heat", "damped wave vs heat flow from u0+u1");
  auto* ver = app.add_subcommand("verify", "run the full acceptance suite");

  std::string fit_input, fit_column = "l2_sq", fit_out;
  double fit_tmin = 0.0, fit_tmax = 0.0;
  auto* fit = app.add_subcommand("fit", "fit a decay exponent on an emitted CSV trace");
  fit->add_option("--input", fit_input, "CSV file")->required();
  fit->add_option("--column", fit_column, "column to fit");
  fit->add_option("--t-min", fit_tmin, "window start");
  fit->add_option("--t-max", fit_tmax, "window end");
  fit->add_option("--out-file", fit_out, "also write the JSON here");

  std::string plot_input, plot_x = "t", plot_y = "E_total", plot_title, plot_out = "plot.svg";
  bool plot_loglog = false;
  auto* plt = app.add_subcommand("plot", "render an SVG chart from an emitted CSV");
  plt->add_option("--input", plot_input, "CSV file")->required();
  plt->add_option("--x", plot_x, "x column");
  plt->add_option("--y", plot_y, "comma-separated y columns");
  plt->add_flag("--log-log", plot_loglog, "log-log axes");
  plt->add_option("--title", plot_title, "chart title");
  plt->add_option("--out-file", plot_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) ga.seed = seed_val;

  try {
    if (sim->parsed() || swp->parsed() || gcc->parsed() || cmp->parsed() || ver->parsed()) {
      if (ga.config_path.empty())
        throw declab::Error(declab::Errc::ValidationError, "cli-harness",
                            "--config is required for this subcommand");
    }
    if (sim->parsed()) return cmd_simulate(ga);
    if (swp->parsed()) return cmd_sweep(ga);
    if (gcc->parsed()) return cmd_check_gcc(ga);
    if (cmp->parsed()) return cmd_compare_heat(ga);
    if (ver->parsed()) return cmd_verify(ga);
    if (fit->parsed()) return cmd_fit(ga, fit_input, fit_column, fit_tmin, fit_tmax, fit_out);
    if (plt->parsed())
      return cmd_plot(plot_input, plot_x, plot_y, plot_loglog, plot_title, plot_out);
  } catch (const declab::Error& e) {
    std::cout << declab::error_json(e.module(), declab::errc_name(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cout << declab::error_json("cli-harness", "INTERNAL", e.what());
    return 2;
  }
  return 1;
}
