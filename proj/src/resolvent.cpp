#include "declab/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "declab/rng.hpp"

namespace declab {

namespace {
constexpr const char* kModule = "resolvent-lab";

HelmholtzSystem assemble_impl(const GridMask& g, const Field& a, cplx alpha, cplx beta) {
  if (a.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "damper does not match grid");
  HelmholtzSystem sys;
  sys.grid = &g;
  sys.alpha = alpha;
  sys.beta = beta;
  sys.inv_h2 = 1.0 / (g.h * g.h);

  sys.unk_of.assign(g.size(), -1);
  sys.node_of.reserve(g.interior_count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_interior(i)) {
      sys.unk_of[i] = static_cast<long>(sys.node_of.size());
      sys.node_of.push_back(static_cast<long>(i));
    }
  }
  sys.n = static_cast<long>(sys.node_of.size());

  const double diag_lap = 2.0 * g.dim * sys.inv_h2;
  sys.diag.resize(sys.n);
  sys.nbr.assign(sys.n, {-1, -1, -1, -1});
  long bw = 0;
  for (long k = 0; k < sys.n; ++k) {
    long node = sys.node_of[k];
    sys.diag[k] = diag_lap + alpha + beta * a.v[node];
    long offs[4] = {-1, +1, -g.nx, +g.nx};
    int n_off = g.dim == 2 ? 4 : 2;
    for (int q = 0; q < n_off; ++q) {
      long nb = node + offs[q];
      long u = sys.unk_of[nb]; // stencil neighbors always exist for interior nodes
      sys.nbr[k][q] = u;
      if (u >= 0) bw = std::max(bw, std::abs(u - k));
    }
  }
  sys.bandwidth = bw;
  return sys;
}
} // namespace

HelmholtzSystem assemble(const GridMask& g, const Field& a, double s) {
  HelmholtzSystem sys = assemble_impl(g, a, cplx(-s * s, 0.0), cplx(0.0, s));
  sys.s = s;
  return sys;
}

HelmholtzSystem assemble_general(const GridMask& g, const Field& a, cplx lambda) {
  return assemble_impl(g, a, lambda * lambda, lambda);
}

void HelmholtzSystem::apply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
  y.assign(n, cplx{});
  for (long k = 0; k < n; ++k) {
    cplx acc = diag[k] * x[k];
    for (long u : nbr[k])
      if (u >= 0) acc -= inv_h2 * x[u];
    y[k] = acc;
  }
}

std::vector<cplx> HelmholtzSystem::lower_band() const {
  std::vector<cplx> band(static_cast<std::size_t>(n) * (bandwidth + 1), cplx{});
  for (long k = 0; k < n; ++k) {
    band[k * (bandwidth + 1)] = diag[k];
    for (long u : nbr[k]) {
      if (u > k) band[k * (bandwidth + 1) + (u - k)] = cplx(-inv_h2, 0.0);
    }
  }
  return band;
}

namespace {
std::vector<cplx> restrict_to_unknowns(const HelmholtzSystem& sys, const CField& f) {
  std::vector<cplx> r(sys.n);
  for (long k = 0; k < sys.n; ++k) r[k] = f.v[sys.node_of[k]];
  return r;
}

CField extend_to_grid(const HelmholtzSystem& sys, const std::vector<cplx>& x) {
  CField w(sys.grid->size(), cplx{});
  for (long k = 0; k < sys.n; ++k) w.v[sys.node_of[k]] = x[k];
  return w;
}

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double true_residual(const HelmholtzSystem& sys, const std::vector<cplx>& x,
                     const std::vector<cplx>& rhs, std::vector<cplx>& scratch) {
  sys.apply(x, scratch);
  double rr = 0.0;
  for (long k = 0; k < sys.n; ++k) rr += std::norm(rhs[k] - scratch[k]);
  return std::sqrt(rr);
}
} // namespace

CField solve(const HelmholtzSystem& sys, const CField& rhs, double tol, SolveInfo* info,
             long direct_limit) {
  if (static_cast<long>(rhs.size()) != static_cast<long>(sys.grid->size()))
    throw Error(Errc::ShapeMismatch, kModule, "rhs does not match grid");
  std::vector<cplx> b = restrict_to_unknowns(sys, rhs);
  double bnorm = vec_norm(b);
  SolveInfo local;
  if (bnorm == 0.0) {
    if (info) *info = local;
    return CField(sys.grid->size(), cplx{});
  }

  std::vector<cplx> x, scratch(sys.n);
  if (sys.n <= direct_limit) {
    auto direct = [&](auto& fact, const char* name) {
      local.method = name;
      x = b;
      fact.solve_in_place(x);
      // iterative refinement until the true residual meets tol
      for (int pass = 0; pass < 4; ++pass) {
        double res = true_residual(sys, x, b, scratch) / bnorm;
        local.residual = res;
        if (res <= tol) return true;
        std::vector<cplx> corr(sys.n);
        for (long k = 0; k < sys.n; ++k) corr[k] = b[k] - scratch[k];
        fact.solve_in_place(corr);
        for (long k = 0; k < sys.n; ++k) x[k] += corr[k];
      }
      double res = true_residual(sys, x, b, scratch) / bnorm;
      local.residual = res;
      return res <= tol;
    };

    bool ok = false;
    try {
      BandedLdlt f = BandedLdlt::factor(sys.n, sys.bandwidth, sys.lower_band());
      ok = direct(f, "ldlt");
    } catch (const Error& e) {
      if (e.code() != Errc::SolverStagnated) throw;
    }
    if (!ok) {
      auto get = [&](long i, long j) -> cplx {
        if (i == j) return sys.diag[i];
        for (long u : sys.nbr[i])
          if (u == j) return cplx(-sys.inv_h2, 0.0);
        return cplx{};
      };
      BandedLu f = BandedLu::factor(sys.n, sys.bandwidth, sys.bandwidth, get);
      ok = direct(f, "banded-lu");
    }
    if (!ok)
      throw Error(Errc::SolverStagnated, kModule,
                  "direct solve failed to reach tolerance " + std::to_string(tol));
  } else {
    local.method = "bicgstab";
    auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) { sys.apply(in, out); };
    x.assign(sys.n, cplx{});
    BicgstabResult r = bicgstab(apply, sys.diag, b, x, tol, std::max<long>(20000, sys.n));
    local.iterations = r.iterations;
    local.residual = r.residual;
    if (!r.converged)
      throw Error(Errc::SolverStagnated, kModule,
                  "BiCGStab stalled at relative residual " + std::to_string(r.residual));
  }
  if (info) *info = local;
  return extend_to_grid(sys, x);
}

CField solve(const HelmholtzSystem& sys, const Field& rhs, double tol, SolveInfo* info,
             long direct_limit) {
  CField c(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) c.v[i] = rhs.v[i];
  return solve(sys, c, tol, info, direct_limit);
}

double cfield_norm_sq(const CField& w, const GridMask& g) {
  if (w.size() != g.size()) throw Error(Errc::ShapeMismatch, kModule, "field/grid mismatch");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  double s = 0.0;
  for (const cplx& z : w.v) s += std::norm(z);
  return hN * s;
}

double cfield_grad_norm_sq(const CField& w, const GridMask& g) {
  if (w.size() != g.size()) throw Error(Errc::ShapeMismatch, kModule, "field/grid mismatch");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  const double inv_h2 = 1.0 / (g.h * g.h);
  double s = 0.0;
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (ix + 1 < g.nx) s += std::norm(w.v[i + 1] - w.v[i]) * inv_h2;
      if (iy + 1 < g.ny) s += std::norm(w.v[i + g.nx] - w.v[i]) * inv_h2;
    }
  }
  return hN * s;
}

cplx cfield_inner(const CField& f, const CField& w, const GridMask& g) {
  if (f.size() != g.size() || w.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "field/grid mismatch");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  cplx s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += f.v[i] * std::conj(w.v[i]);
  return hN * s;
}

double quadform_residual(const GridMask& g, const Field& a, double s, const CField& w,
                         const CField& F) {
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  double grad_sq = cfield_grad_norm_sq(w, g);
  double nsq = cfield_norm_sq(w, g);
  double absorb = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) absorb += a.v[i] * std::norm(w.v[i]);
  absorb *= hN;
  cplx lhs = cplx(grad_sq - s * s * nsq, s * absorb);
  cplx rhs = cfield_inner(F, w, g);
  return std::abs(lhs - rhs);
}

CField make_rhs(RhsFamily family, const DomainSpec& spec, const GridMask& g, std::uint64_t seed,
                int sample_index) {
  CField f(g.size(), cplx{});
  const double r0 = spec.damper_radius, r1 = spec.support_radius;
  double cx = 0.5 * (r0 + r1), cy = 0.0;
  double w = std::min(0.5 * (r1 - r0), 0.45 * (r1 + r0));
  if (family == RhsFamily::RandomBumps) {
    Rng rng(seed + 0x9e37ULL * static_cast<std::uint64_t>(sample_index + 1));
    double rr = rng.uniform(0.5 * (r0 + r1) - 0.2, 0.5 * (r0 + r1) + 0.2);
    double th = spec.dim == 2 ? rng.uniform(0.0, 2.0 * M_PI) : 0.0;
    cx = spec.dim == 2 ? rr * std::cos(th) : rr;
    cy = spec.dim == 2 ? rr * std::sin(th) : 0.0;
  }
  const double sigma = spec.box_halfwidth / 3.0;
  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (!g.is_interior(i)) continue;
      double x = g.x_of(ix);
      if (family == RhsFamily::Spread) {
        double rsq = x * x + y * y;
        f.v[i] = std::exp(-rsq / (2.0 * sigma * sigma));
      } else {
        double dx = x - cx, dy = y - cy;
        double dist = spec.dim == 2 ? std::sqrt(dx * dx + dy * dy) : std::abs(dx);
        f.v[i] = bump_value(dist, w);
      }
    }
  }
  return f;
}

std::vector<ResolventSample> sweep_band(const GridMask& g, const DomainSpec& spec,
                                        const Field& a, const FrequencyBand& band,
                                        RhsFamily family, std::uint64_t seed, double tol,
                                        ThreadPool* pool) {
  if (!(band.s_min > 0.0) || !(band.s_max >= band.s_min) || band.n_samples < 1)
    throw Error(Errc::SpecInvalid, kModule, "bad frequency band");
  std::vector<ResolventSample> out(band.n_samples);
  parallel_for(pool, 0, band.n_samples, [&](long lo, long hi) {
    for (long k = lo; k < hi; ++k) {
      double frac = band.n_samples == 1
                        ? 0.0
                        : static_cast<double>(k) / static_cast<double>(band.n_samples - 1);
      double s = band.s_min * std::pow(band.s_max / band.s_min, frac);
      ResolventSample& smp = out[k];
      smp.s = s;
      CField F = make_rhs(family, spec, g, seed, static_cast<int>(k));
      smp.norm_f = std::sqrt(cfield_norm_sq(F, g));
      try {
        HelmholtzSystem sys = assemble(g, a, s);
        SolveInfo info;
        CField w = solve(sys, F, tol, &info);
        smp.norm_w = std::sqrt(cfield_norm_sq(w, g));
        smp.norm_gradw = std::sqrt(cfield_grad_norm_sq(w, g));
        double fsq = smp.norm_f * smp.norm_f;
        smp.h1_ratio = (smp.norm_gradw * smp.norm_gradw + smp.norm_w * smp.norm_w) / fsq;
        smp.hf_ratio = s * smp.norm_w / smp.norm_f;
        smp.quadform_resid = quadform_residual(g, a, s, w, F);
        smp.residual = info.residual;
        smp.iterations = info.iterations;
        smp.method = info.method;
        smp.converged = true;
      } catch (const Error& e) {
        if (e.code() != Errc::SolverStagnated) throw;
        smp.converged = false;
        smp.method = "failed";
      }
    }
  });
  return out;
}

BlockResolventResult block_resolvent_apply(const GridMask& g, const Field& a, cplx lambda,
                                           const Field& f1, const Field& f2, double tol) {
  if (lambda == cplx{} || lambda.real() < 0.0)
    throw Error(Errc::SpecInvalid, kModule, "need Re(lambda) >= 0 and lambda != 0");
  if (f1.size() != g.size() || f2.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "data does not match grid");

  CField rhs(g.size(), cplx{});
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_interior(i)) continue;
    rhs.v[i] = (lambda + a.v[i]) * f1.v[i] + f2.v[i];
  }

  BlockResolventResult res;
  HelmholtzSystem sys = assemble_general(g, a, lambda);
  res.u1 = solve(sys, rhs, tol, &res.info);
  res.u2 = CField(g.size(), cplx{});
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_interior(i)) continue;
    res.u2.v[i] = lambda * res.u1.v[i] - f1.v[i];
  }

  // a posteriori block residual of (lambda - B_a) U = (f1, f2)
  const double inv_h2 = 1.0 / (g.h * g.h);
  double num = 0.0, den = 0.0;
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (!g.is_interior(i)) continue;
      cplx lap = (res.u1.v[i - 1] + res.u1.v[i + 1] - 2.0 * res.u1.v[i]) * inv_h2;
      if (g.dim == 2)
        lap += (res.u1.v[i - g.nx] + res.u1.v[i + g.nx] - 2.0 * res.u1.v[i]) * inv_h2;
      cplx r1 = lambda * res.u1.v[i] - res.u2.v[i] - f1.v[i];
      cplx r2 = lambda * res.u2.v[i] - lap + a.v[i] * res.u2.v[i] - f2.v[i];
      num += std::norm(r1) + std::norm(r2);
      den += std::norm(cplx(f1.v[i], 0.0)) + std::norm(cplx(f2.v[i], 0.0));
    }
  }
  res.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  return res;
}

namespace {
Field radial_cutoff(const GridMask& g, double radius) {
  // 1 inside radius-1, smooth ramp down to 0 at radius
  Field chi(g.size(), 0.0);
  auto ramp = [](double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double e1 = std::exp(-1.0 / (1.0 - s)), e2 = std::exp(-1.0 / s);
    return e1 / (e1 + e2);
  };
  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      double x = g.x_of(ix);
      double r = g.dim == 2 ? std::sqrt(x * x + y * y) : std::abs(x);
      chi.v[g.at(ix, iy)] = ramp(r - (radius - 1.0));
    }
  }
  return chi;
}
} // namespace

LowFreqProbe low_freq_probe(const GridMask& g, const DomainSpec& spec, const Field& a,
                            const Field& f1, const Field& f2,
                            const std::vector<double>& betas, int n_s, double delta,
                            double chi_radius, double tol, ThreadPool* pool) {
  if (betas.empty() || n_s < 1 || delta <= 0.0)
    throw Error(Errc::SpecInvalid, kModule, "bad low-frequency probe parameters");
  for (double b : betas)
    if (!(b > 0.0) || b > delta)
      throw Error(Errc::SpecInvalid, kModule, "betas must lie in (0, delta]");
  (void)spec;

  Field chi = radial_cutoff(g, chi_radius);
  LowFreqProbe probe;
  struct Job {
    double beta, s;
  };
  std::vector<Job> jobs;
  for (double beta : betas)
    for (int k = 0; k < n_s; ++k) {
      double s = n_s == 1 ? 0.0 : -delta + 2.0 * delta * k / (n_s - 1);
      jobs.push_back({beta, s});
    }
  std::vector<LowFreqSample> samples(jobs.size());
  parallel_for(pool, 0, static_cast<long>(jobs.size()), [&](long lo, long hi) {
    for (long k = lo; k < hi; ++k) {
      LowFreqSample& smp = samples[k];
      smp.beta = jobs[k].beta;
      smp.s = jobs[k].s;
      try {
        BlockResolventResult r =
            block_resolvent_apply(g, a, cplx(jobs[k].beta, jobs[k].s), f1, f2, tol);
        CField cu1(g.size()), cu2(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          cu1.v[i] = chi.v[i] * r.u1.v[i];
          cu2.v[i] = chi.v[i] * r.u2.v[i];
        }
        smp.energy_norm =
            std::sqrt(cfield_grad_norm_sq(cu1, g)) + std::sqrt(cfield_norm_sq(cu2, g));
        smp.converged = true;
      } catch (const Error& e) {
        if (e.code() != Errc::SolverStagnated) throw;
        smp.converged = false;
      }
    }
  });
  probe.samples = samples;

  probe.max_per_beta.assign(betas.size(), 0.0);
  for (const auto& smp : samples) {
    for (std::size_t bi = 0; bi < betas.size(); ++bi)
      if (smp.beta == betas[bi])
        probe.max_per_beta[bi] = std::max(probe.max_per_beta[bi], smp.energy_norm);
  }
  for (std::size_t bi = 1; bi < probe.max_per_beta.size(); ++bi)
    if (probe.max_per_beta[bi] >= 2.0 * probe.max_per_beta[bi - 1]) probe.bounded = false;
  return probe;
}

} // namespace declab
