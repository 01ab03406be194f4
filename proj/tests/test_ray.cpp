#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "declab/domain.hpp"
#include "declab/ray.hpp"

using namespace declab;

namespace {
// closed-form line-circle intersection, kept independent of the tracer
struct Oracle {
  double t_hit, hx, hy, rdx, rdy;
};
Oracle reflect_oracle(double px, double py, double dx, double dy, const Disk& o) {
  double ox = px - o.cx, oy = py - o.cy;
  double b = dx * ox + dy * oy;
  double c = ox * ox + oy * oy - o.radius * o.radius;
  double t = -b - std::sqrt(b * b - c);
  double hx = px + t * dx, hy = py + t * dy;
  double nx = (hx - o.cx) / o.radius, ny = (hy - o.cy) / o.radius;
  double dn = dx * nx + dy * ny;
  return {t, hx, hy, dx - 2.0 * dn * nx, dy - 2.0 * dn * ny};
}

DomainSpec disk_spec() {
  DomainSpec s;
  s.dim = 2;
  s.box_halfwidth = 6.0;
  s.spacing = 0.1;
  s.obstacles = {{0.0, 0.0, 0.5}};
  s.damper_radius = 2.0;
  s.support_radius = 3.0;
  return s;
}

DomainSpec trap_spec() {
  DomainSpec s;
  s.dim = 2;
  s.box_halfwidth = 6.0;
  s.spacing = 0.1;
  s.obstacles = {{-2.0, 0.0, 0.5}, {2.0, 0.0, 0.5}};
  s.damper_radius = 3.0;
  s.support_radius = 3.5;
  return s;
}

Field hole_damper(const DomainSpec& s, const GridMask& g) {
  DamperSpec d;
  d.kind = DamperKind::ExteriorWithHole;
  d.hole = {-2.0, 2.0, -0.2, 0.2};
  return sample_damper(d, s, g);
}
} // namespace

TEST_CASE("normal incidence reflects straight back") {
  std::vector<Disk> obs = {{0.0, 0.0, 1.0}};
  RayPath p = trace_ray({3.0, 0.0, -1.0, 0.0, 0.0}, obs, 10.0);
  REQUIRE(p.vertices.size() >= 2);
  const Ray& hit = p.vertices[1];
  CHECK(hit.px == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hit.py == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hit.time == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(hit.dx == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hit.dy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a ray that misses travels straight") {
  std::vector<Disk> obs = {{0.0, 0.0, 1.0}};
  RayPath p = trace_ray({3.0, 3.0, -1.0, 0.0, 0.0}, obs, 10.0);
  REQUIRE(p.vertices.size() == 2);
  CHECK(p.vertices.back().px == doctest::Approx(-7.0));
  CHECK(p.vertices.back().py == doctest::Approx(3.0));
  CHECK(p.vertices.back().time == doctest::Approx(10.0));
}

TEST_CASE("oblique hit matches the closed-form intersection oracle") {
  Disk o{0.0, 0.0, 1.0};
  Oracle want = reflect_oracle(3.0, 0.5, -1.0, 0.0, o);
  CHECK(want.hx == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));

  RayPath p = trace_ray({3.0, 0.5, -1.0, 0.0, 0.0}, {o}, 10.0);
  REQUIRE(p.vertices.size() >= 2);
  const Ray& hit = p.vertices[1];
  CHECK(hit.px == doctest::Approx(want.hx).epsilon(1e-12));
  CHECK(hit.py == doctest::Approx(want.hy).epsilon(1e-12));
  CHECK(hit.time == doctest::Approx(want.t_hit).epsilon(1e-12));
  CHECK(hit.dx == doctest::Approx(want.rdx).epsilon(1e-12));
  CHECK(hit.dy == doctest::Approx(want.rdy).epsilon(1e-12));
}

TEST_CASE("reflection invariants: unit speed, reversed normal, kept tangent") {
  Disk o{0.5, -0.25, 1.3};
  Ray start{4.0, 1.0, -0.8, -0.6, 0.0};
  RayPath p = trace_ray(start, {o}, 20.0);
  REQUIRE(p.vertices.size() >= 2);
  for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
    const Ray& a = p.vertices[k];
    CHECK(std::abs(std::hypot(a.dx, a.dy) - 1.0) <= 1e-12);
    const Ray& b = p.vertices[k + 1];
    if (k + 2 < p.vertices.size()) { // b is a reflection vertex
      double nx = (b.px - o.cx) / o.radius, ny = (b.py - o.cy) / o.radius;
      double din = a.dx * nx + a.dy * ny;
      double dout = b.dx * nx + b.dy * ny;
      CHECK(dout == doctest::Approx(-din).epsilon(1e-12));
      double tin = -a.dx * ny + a.dy * nx;
      double tout = -b.dx * ny + b.dy * nx;
      CHECK(tout == doctest::Approx(tin).epsilon(1e-12));
    }
  }
  // path time equals path length at speed 1
  double len = 0.0;
  for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k)
    len += std::hypot(p.vertices[k + 1].px - p.vertices[k].px,
                      p.vertices[k + 1].py - p.vertices[k].py);
  CHECK(len == doctest::Approx(p.vertices.back().time).epsilon(1e-12));
  CHECK(p.vertices.back().time == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("axis ray between two disks bounces forever") {
  std::vector<Disk> obs = {{-2.0, 0.0, 0.5}, {2.0, 0.0, 0.5}};
  RayPath p = trace_ray({0.0, 0.0, 1.0, 0.0, 0.0}, obs, 50.0);
  CHECK(p.vertices.size() > 10);
  for (const Ray& v : p.vertices) {
    CHECK(std::abs(v.px) <= 1.5 + 1e-9);
    CHECK(std::abs(v.py) <= 1e-12);
  }
}

TEST_CASE("exactly tangent ray passes through without a reflection") {
  std::vector<Disk> obs = {{0.0, 0.0, 1.0}};
  RayPath p = trace_ray({3.0, 1.0, -1.0, 0.0, 0.0}, obs, 10.0);
  REQUIRE(p.vertices.size() == 2); // no reflection vertex
  CHECK(p.vertices.back().py == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.vertices.back().px == doctest::Approx(-7.0).epsilon(1e-12));
}

TEST_CASE("starting inside an obstacle is rejected") {
  std::vector<Disk> obs = {{0.0, 0.0, 1.0}};
  CHECK_THROWS_AS(trace_ray({0.2, 0.0, 1.0, 0.0, 0.0}, obs, 1.0), Error);
}

TEST_CASE("single convex obstacle with exterior damper satisfies the check") {
  DomainSpec s = disk_spec();
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 1.0;
  Field a = sample_damper(d, s, g);
  GccSampling smp;
  smp.seed = 42;
  GccReport rep = check_gcc(a, s, g, smp);
  CHECK(rep.satisfied);
  CHECK(rep.t0_estimate <= 2.0 * (s.damper_radius + 1.0) + 1.0);
  CHECK(rep.num_samples == 200 * 64);
}

TEST_CASE("two-disk trap with a damper hole is caught via the axis ray") {
  DomainSpec s = trap_spec();
  GridMask g = build_grid(s);
  Field a = hole_damper(s, g);
  GccSampling smp;
  smp.seed = 42;
  GccReport rep = check_gcc(a, s, g, smp);
  CHECK_FALSE(rep.satisfied);
  CHECK(rep.unresolved >= 1);
  CHECK(std::abs(rep.worst_ray.py) <= 2.0 * g.h);
}

TEST_CASE("constant damper: every ray starts inside omega, T0 = 0") {
  DomainSpec s = disk_spec();
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ConstantOne;
  Field a = sample_damper(d, s, g);
  GccSampling smp;
  smp.seed = 7;
  GccReport rep = check_gcc(a, s, g, smp);
  CHECK(rep.satisfied);
  CHECK(rep.t0_estimate == 0.0);
}

TEST_CASE("exterior variant: trapped ray fails, free rays escape") {
  DomainSpec s = trap_spec();
  GridMask g = build_grid(s);
  Field zero(g.size(), 0.0);
  GccSampling smp;
  smp.seed = 11;
  GccReport rep = check_egc(zero, s, g, smp, 5.0);
  CHECK_FALSE(rep.satisfied); // the axis ray neither escapes nor meets omega

  DomainSpec fs = disk_spec();
  fs.obstacles.clear();
  GridMask gf = build_grid(fs);
  Field zf(gf.size(), 0.0);
  GccReport rep2 = check_egc(zf, fs, gf, smp, 5.0);
  CHECK(rep2.satisfied); // straight rays leave B_5
  CHECK(rep2.t0_estimate <= 2.0 * 5.0 + 3.0);

  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 1.0;
  DomainSpec ds = disk_spec();
  GridMask gd = build_grid(ds);
  Field ad = sample_damper(d, ds, gd);
  GccReport rep3 = check_egc(ad, ds, gd, smp, 5.0);
  CHECK(rep3.satisfied);
}

TEST_CASE("enlarging the damping region never flips satisfied to false") {
  DomainSpec s = disk_spec();
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 1.0;
  Field small = sample_damper(d, s, g);
  Field large = small;
  for (std::size_t i = 0; i < large.size(); ++i)
    if (g.kind[i] != NodeKind::Obstacle) large.v[i] = std::max(large.v[i], 0.5);
  GccSampling smp;
  smp.seed = 3;
  GccReport r_small = check_gcc(small, s, g, smp);
  GccReport r_large = check_gcc(large, s, g, smp);
  if (r_small.satisfied) CHECK(r_large.satisfied);
  CHECK(r_large.t0_estimate <= r_small.t0_estimate + 1e-9);
}
