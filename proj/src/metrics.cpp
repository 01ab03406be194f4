#include "declab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace declab {

namespace {
constexpr const char* kModule = "energy-metrics";
constexpr double kEnergyFloor = 1e-30;

// Row-indexed partial sums keep reductions deterministic for any thread count.
double row_reduce(const GridMask& g, ThreadPool* pool,
                  const std::function<double(long)>& row_sum) {
  std::vector<double> partial(static_cast<std::size_t>(g.ny), 0.0);
  parallel_for(pool, 0, g.ny, [&](long r0, long r1) {
    for (long iy = r0; iy < r1; ++iy) partial[static_cast<std::size_t>(iy)] = row_sum(iy);
  });
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}
} // namespace

double total_energy(const Field& u_old, const Field& u_new, double dt, const GridMask& g,
                    ThreadPool* pool) {
  if (u_old.size() != g.size() || u_new.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "state does not match grid");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  const double inv_dt = 1.0 / dt;
  const double inv_h2 = 1.0 / (g.h * g.h);
  double s = row_reduce(g, pool, [&](long iy) {
    double acc = 0.0;
    const double* uo = u_old.v.data();
    const double* un = u_new.v.data();
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      double v = (un[i] - uo[i]) * inv_dt;
      acc += v * v;
      if (ix + 1 < g.nx) acc += (un[i + 1] - un[i]) * (uo[i + 1] - uo[i]) * inv_h2;
      if (iy + 1 < g.ny) {
        std::size_t j = g.at(ix, iy + 1);
        acc += (un[j] - un[i]) * (uo[j] - uo[i]) * inv_h2;
      }
    }
    return acc;
  });
  return 0.5 * hN * s;
}

double local_energy(const Field& u_old, const Field& u_new, double dt, const GridMask& g,
                    double r, double box_halfwidth) {
  if (u_old.size() != g.size() || u_new.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "state does not match grid");
  if (r <= 0.0 || r > box_halfwidth * (1.0 + 1e-12))
    throw Error(Errc::RadiusOutOfRange, kModule,
                "local radius " + std::to_string(r) + " outside (0, R_box]");
  if (r >= box_halfwidth - 0.25 * g.h)
    return total_energy(u_old, u_new, dt, g); // whole grid, exact match with E_total
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  const double inv_dt = 1.0 / dt;
  const double inv_h2 = 1.0 / (g.h * g.h);
  const double r2 = r * r;
  double s = row_reduce(g, nullptr, [&](long iy) {
    double acc = 0.0;
    double y = g.y_of(iy);
    const double* uo = u_old.v.data();
    const double* un = u_new.v.data();
    for (long ix = 0; ix < g.nx; ++ix) {
      double x = g.x_of(ix);
      if (x * x + y * y > r2) continue;
      std::size_t i = g.at(ix, iy);
      double v = (un[i] - uo[i]) * inv_dt;
      acc += v * v;
      if (ix + 1 < g.nx) acc += (un[i + 1] - un[i]) * (uo[i + 1] - uo[i]) * inv_h2;
      if (iy + 1 < g.ny) {
        std::size_t j = g.at(ix, iy + 1);
        acc += (un[j] - un[i]) * (uo[j] - uo[i]) * inv_h2;
      }
    }
    return acc;
  });
  return 0.5 * hN * s;
}

double l2_norm_sq(const Field& f, const GridMask& g, ThreadPool* pool) {
  if (f.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "field does not match grid");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  double s = row_reduce(g, pool, [&](long iy) {
    double acc = 0.0;
    for (long ix = 0; ix < g.nx; ++ix) {
      double u = f.v[g.at(ix, iy)];
      acc += u * u;
    }
    return acc;
  });
  return hN * s;
}

double dissipation_term(const Field& u_prev, const Field& u_next, const Field& a, double dt,
                        const GridMask& g, ThreadPool* pool) {
  if (u_prev.size() != g.size() || u_next.size() != g.size() || a.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "state does not match grid");
  const double hN = g.dim == 2 ? g.h * g.h : g.h;
  const double inv_2dt = 0.5 / dt;
  double s = row_reduce(g, pool, [&](long iy) {
    double acc = 0.0;
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      double v = (u_next.v[i] - u_prev.v[i]) * inv_2dt;
      acc += a.v[i] * v * v;
    }
    return acc;
  });
  return hN * s;
}

double dissipation_residual(const Field& u_prevprev, const Field& u_prev, const Field& u_curr,
                            const Field& a, double dt, const GridMask& g, ThreadPool* pool) {
  double e_new = total_energy(u_prev, u_curr, dt, g, pool);
  double e_old = total_energy(u_prevprev, u_prev, dt, g, pool);
  double diss = dissipation_term(u_prevprev, u_curr, a, dt, g, pool);
  double num = std::abs((e_new - e_old) / dt + diss);
  return num / std::max(e_new, kEnergyFloor);
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                   double t_min, double t_max) {
  if (times.size() != values.size())
    throw Error(Errc::ShapeMismatch, kModule, "times and values differ in length");
  if (!(t_min < t_max))
    throw Error(Errc::SpecInvalid, kModule, "fit window is empty");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    if (t < t_min || t > t_max) continue;
    if (values[i] <= 0.0)
      throw Error(Errc::NonpositiveData, kModule,
                  "non-positive sample at t=" + std::to_string(t) + "; shrink the fit window");
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 10)
    throw Error(Errc::SpecInvalid, kModule,
                "fit window holds " + std::to_string(xs.size()) + " samples, need >= 10");

  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  double slope = sxy / sxx;
  fit.exponent = -slope;
  fit.intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (fit.intercept + slope * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.n_points = xs.size();
  return fit;
}

double theta_exponent(int dim) {
  if (dim < 1) throw Error(Errc::SpecInvalid, kModule, "dimension must be >= 1");
  long quarters = std::min<long>(4 + 2L * dim, 3L * dim);
  return static_cast<double>(quarters) / 4.0;
}

namespace {
double simpson(double fa, double fm, double fb, double len) { return len * (fa + 4.0 * fm + fb) / 6.0; }

double simpson_adapt(const std::function<double(double)>& f, double lo, double hi, double flo,
                     double fmid, double fhi, double whole, double eps, int depth) {
  double mid = 0.5 * (lo + hi);
  double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
  double flm = f(lm), frm = f(rm);
  double left = simpson(flo, flm, fmid, mid - lo);
  double right = simpson(fmid, frm, fhi, hi - mid);
  double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * eps) return left + right + err / 15.0;
  return simpson_adapt(f, lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
         simpson_adapt(f, mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
}
} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol) {
  if (hi <= lo) return 0.0;
  double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  double whole = simpson(flo, fmid, fhi, hi - lo);
  double eps = std::max(std::abs(whole), 1e-300) * rel_tol;
  return simpson_adapt(f, lo, hi, flo, fmid, fhi, whole, eps, 60);
}

double conv_bound_ratio(double a, double b, double t) {
  if (a <= 0.0 || b <= 0.0 || std::max(a, b) <= 1.0)
    throw Error(Errc::HypothesisViolated, kModule,
                "need a,b > 0 and max(a,b) > 1; got a=" + std::to_string(a) +
                    " b=" + std::to_string(b));
  if (t < 0.0) throw Error(Errc::SpecInvalid, kModule, "t must be nonnegative");
  if (t == 0.0) return 0.0;
  auto f = [&](double s) { return std::pow(1.0 + t - s, -a) * std::pow(1.0 + s, -b); };
  // integrand peaks at both endpoints; integrate the halves separately
  double integral =
      adaptive_simpson(f, 0.0, 0.5 * t, 1e-8) + adaptive_simpson(f, 0.5 * t, t, 1e-8);
  return integral * std::pow(1.0 + t, std::min(a, b));
}

Field build_cutoff(const DomainSpec& spec, const GridMask& g) {
  const double r0 = spec.damper_radius, r1 = spec.support_radius;
  if (!(r1 > r0))
    throw Error(Errc::SpecInvalid, kModule, "cutoff needs r1 > r0");
  auto ramp = [](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double e1 = std::exp(-1.0 / s), e2 = std::exp(-1.0 / (1.0 - s));
    return e1 / (e1 + e2);
  };
  Field phi(g.size(), 0.0);
  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      double x = g.x_of(ix);
      double r = g.dim == 2 ? std::sqrt(x * x + y * y) : std::abs(x);
      phi.v[g.at(ix, iy)] = ramp((r - r0) / (r1 - r0));
    }
  }
  return phi;
}

Field cutoff_forcing(const Field& u, const Field& phi, const GridMask& g) {
  if (u.size() != g.size() || phi.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "field does not match grid");
  Field f(g.size(), 0.0);
  const double inv_2h = 0.5 / g.h;
  const double inv_h2 = 1.0 / (g.h * g.h);
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (!g.is_interior(i)) continue;
      double gpx = (phi.v[i + 1] - phi.v[i - 1]) * inv_2h;
      double gux = (u.v[i + 1] - u.v[i - 1]) * inv_2h;
      double lap = (phi.v[i + 1] + phi.v[i - 1] - 2.0 * phi.v[i]) * inv_h2;
      double grad_dot = gpx * gux;
      if (g.dim == 2) {
        std::size_t n = g.at(ix, iy + 1), s = g.at(ix, iy - 1);
        double gpy = (phi.v[n] - phi.v[s]) * inv_2h;
        double guy = (u.v[n] - u.v[s]) * inv_2h;
        grad_dot += gpy * guy;
        lap += (phi.v[n] + phi.v[s] - 2.0 * phi.v[i]) * inv_h2;
      }
      f.v[i] = -grad_dot - lap * u.v[i];
    }
  }
  return f;
}

} // namespace declab
