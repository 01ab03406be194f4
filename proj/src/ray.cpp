#include "declab/ray.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "declab/rng.hpp"

namespace declab {

namespace {
constexpr const char* kModule = "ray-gcc";
constexpr double kTangentTol = 1e-12;
constexpr double kHitTol = 1e-9;
constexpr int kMaxBounces = 100000;

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  double nx = 0.0, ny = 0.0; // outward unit normal at the hit point
  bool found = false;
};

Hit first_hit(double px, double py, double dx, double dy, const std::vector<Disk>& obstacles) {
  Hit best;
  for (const auto& o : obstacles) {
    double ox = px - o.cx, oy = py - o.cy;
    double b = dx * ox + dy * oy;
    double c = ox * ox + oy * oy - o.radius * o.radius;
    double disc = b * b - c;
    if (disc <= 0.0) continue;
    double t = -b - std::sqrt(disc);
    if (t <= kHitTol || t >= best.t) continue;
    best.t = t;
    best.found = true;
    double hx = px + t * dx, hy = py + t * dy;
    best.nx = (hx - o.cx) / o.radius;
    best.ny = (hy - o.cy) / o.radius;
  }
  return best;
}
} // namespace

RayPath trace_ray(const Ray& start, const std::vector<Disk>& obstacles, double t_max) {
  if (t_max <= 0.0) throw Error(Errc::SpecInvalid, kModule, "t_max must be positive");
  double norm = std::sqrt(start.dx * start.dx + start.dy * start.dy);
  if (norm == 0.0) throw Error(Errc::SpecInvalid, kModule, "ray direction must be nonzero");
  for (const auto& o : obstacles) {
    double ox = start.px - o.cx, oy = start.py - o.cy;
    if (ox * ox + oy * oy < o.radius * o.radius * (1.0 - 1e-12))
      throw Error(Errc::SpecInvalid, kModule, "ray starts inside an obstacle");
  }

  RayPath path;
  Ray cur = start;
  cur.dx /= norm;
  cur.dy /= norm;
  cur.time = 0.0;
  path.vertices.push_back(cur);

  double remaining = t_max;
  for (int bounce = 0; bounce < kMaxBounces && remaining > 0.0; ++bounce) {
    Hit hit = first_hit(cur.px, cur.py, cur.dx, cur.dy, obstacles);
    if (!hit.found || hit.t >= remaining) {
      cur.px += remaining * cur.dx;
      cur.py += remaining * cur.dy;
      cur.time += remaining;
      remaining = 0.0;
      path.vertices.push_back(cur);
      break;
    }
    cur.px += hit.t * cur.dx;
    cur.py += hit.t * cur.dy;
    cur.time += hit.t;
    remaining -= hit.t;
    double dn = cur.dx * hit.nx + cur.dy * hit.ny;
    if (std::abs(dn) < kTangentTol) {
      path.tangential_flagged = true; // grazing ray: continue straight
      // nudge past the tangency point so the same hit is not re-detected
      double eps = std::min(remaining, 16.0 * kHitTol);
      cur.px += eps * cur.dx;
      cur.py += eps * cur.dy;
      cur.time += eps;
      remaining -= eps;
      continue;
    }
    cur.dx -= 2.0 * dn * hit.nx;
    cur.dy -= 2.0 * dn * hit.ny;
    double n2 = std::sqrt(cur.dx * cur.dx + cur.dy * cur.dy);
    cur.dx /= n2;
    cur.dy /= n2;
    path.vertices.push_back(cur);
  }
  return path;
}

namespace {

// First time along the billiard path at which pred(x, y) holds, scanned at
// resolution step_len. Returns +inf when it never does before t_max.
template <typename Pred>
double first_time(const Ray& start, const std::vector<Disk>& obstacles, double t_max,
                  double step_len, bool& tangential, const Pred& pred) {
  if (pred(start.px, start.py)) return 0.0;
  RayPath path = trace_ray(start, obstacles, t_max);
  tangential = tangential || path.tangential_flagged;
  for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
    const Ray& a = path.vertices[k];
    const Ray& b = path.vertices[k + 1];
    double seg = b.time - a.time;
    if (seg <= 0.0) continue;
    long n_steps = std::max<long>(1, static_cast<long>(std::ceil(seg / step_len)));
    for (long j = 1; j <= n_steps; ++j) {
      double t = seg * static_cast<double>(j) / static_cast<double>(n_steps);
      double x = a.px + t * a.dx, y = a.py + t * a.dy;
      if (pred(x, y)) return a.time + t;
    }
  }
  return std::numeric_limits<double>::infinity();
}

GccReport run_check(const Field& damper, const DomainSpec& spec, const GridMask& g,
                    const GccSampling& s, double escape_radius, ThreadPool* pool) {
  if (s.n_pos < 1 || s.n_dir < 1)
    throw Error(Errc::SpecInvalid, kModule, "sampling counts must be >= 1");
  if (s.eps_omega <= 0.0) throw Error(Errc::SpecInvalid, kModule, "eps_omega must be positive");

  DamperSampler a_of(damper, g);
  const double sample_r = std::min(spec.damper_radius + 1.0, spec.box_halfwidth - g.h);
  const double esc2 = escape_radius * escape_radius;

  // start positions: uniform in B_{r0+1} minus obstacles (rejection)
  std::vector<Ray> rays;
  Rng rng(s.seed);
  for (int p = 0; p < s.n_pos; ++p) {
    double x = 0.0, y = 0.0;
    for (int tries = 0; tries < 10000; ++tries) {
      x = rng.uniform(-sample_r, sample_r);
      y = spec.dim == 2 ? rng.uniform(-sample_r, sample_r) : 0.0;
      double rr = spec.dim == 2 ? x * x + y * y : x * x;
      if (rr > sample_r * sample_r) continue;
      bool inside = false;
      for (const auto& o : spec.obstacles)
        if (o.contains(x, y)) inside = true;
      if (!inside) break;
    }
    if (spec.dim == 1) {
      rays.push_back({x, 0.0, 1.0, 0.0, 0.0});
      rays.push_back({x, 0.0, -1.0, 0.0, 0.0});
    } else {
      for (int d = 0; d < s.n_dir; ++d) {
        double th = 2.0 * M_PI * d / s.n_dir;
        rays.push_back({x, y, std::cos(th), std::sin(th), 0.0});
      }
    }
  }
  // deterministic candidates for two-disk traps: the connecting axis
  for (std::size_t i = 0; i < spec.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.obstacles.size(); ++j) {
      const Disk& A = spec.obstacles[i];
      const Disk& B = spec.obstacles[j];
      double mx = 0.5 * (A.cx + B.cx), my = 0.5 * (A.cy + B.cy);
      bool inside = false;
      for (const auto& o : spec.obstacles)
        if (o.contains(mx, my)) inside = true;
      if (inside) continue;
      double vx = B.cx - A.cx, vy = B.cy - A.cy;
      double len = std::sqrt(vx * vx + vy * vy);
      if (len < 1e-12) continue;
      rays.push_back({mx, my, vx / len, vy / len, 0.0});
      rays.push_back({mx, my, -vx / len, -vy / len, 0.0});
    }
  }

  const double step_len = 0.5 * g.h;
  std::vector<double> hit_time(rays.size(), 0.0);
  std::vector<char> tang(rays.size(), 0);
  parallel_for(pool, 0, static_cast<long>(rays.size()), [&](long lo, long hi) {
    for (long k = lo; k < hi; ++k) {
      bool tflag = false;
      auto pred = [&](double x, double y) {
        if (esc2 > 0.0 && x * x + y * y >= esc2) return true;
        return a_of(x, y) > s.eps_omega;
      };
      hit_time[k] = first_time(rays[k], spec.obstacles, s.t_max, step_len, tflag, pred);
      tang[k] = tflag ? 1 : 0;
    }
  });

  GccReport rep;
  rep.num_samples = static_cast<long>(rays.size());
  rep.escape_radius = escape_radius;
  rep.satisfied = true;
  double worst = -1.0;
  for (std::size_t k = 0; k < rays.size(); ++k) {
    rep.tangential_flagged = rep.tangential_flagged || tang[k];
    if (std::isinf(hit_time[k])) {
      if (rep.satisfied) rep.worst_ray = rays[k]; // first failing ray
      rep.satisfied = false;
      ++rep.unresolved;
    } else if (rep.satisfied && hit_time[k] > worst) {
      worst = hit_time[k];
      rep.worst_ray = rays[k];
    }
  }
  rep.t0_estimate = rep.satisfied ? std::max(worst, 0.0) : s.t_max;
  return rep;
}

} // namespace

GccReport check_gcc(const Field& damper, const DomainSpec& spec, const GridMask& g,
                    const GccSampling& s, ThreadPool* pool) {
  return run_check(damper, spec, g, s, 0.0, pool);
}

GccReport check_egc(const Field& damper, const DomainSpec& spec, const GridMask& g,
                    const GccSampling& s, double escape_radius, ThreadPool* pool) {
  if (escape_radius <= 0.0)
    throw Error(Errc::SpecInvalid, kModule, "escape radius must be positive");
  return run_check(damper, spec, g, s, escape_radius, pool);
}

} // namespace declab
