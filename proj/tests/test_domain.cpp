#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "declab/domain.hpp"

using namespace declab;

namespace {
DomainSpec spec_1d(double R = 10.0, double h = 1.0) {
  DomainSpec s;
  s.dim = 1;
  s.box_halfwidth = R;
  s.spacing = h;
  s.damper_radius = 2.0;
  s.support_radius = 3.0;
  return s;
}

DomainSpec spec_2d(double R = 4.0, double h = 1.0) {
  DomainSpec s;
  s.dim = 2;
  s.box_halfwidth = R;
  s.spacing = h;
  s.damper_radius = 2.0;
  s.support_radius = 3.0;
  return s;
}
} // namespace

TEST_CASE("1D grid: 21 nodes, boundary at +-10, 19 interior") {
  GridMask g = build_grid(spec_1d());
  CHECK(g.nx == 21);
  CHECK(g.ny == 1);
  CHECK(g.kind[g.at(0, 0)] == NodeKind::OuterBoundary);
  CHECK(g.kind[g.at(20, 0)] == NodeKind::OuterBoundary);
  CHECK(g.interior_count == 19);
  CHECK(g.x_of(0) == doctest::Approx(-10.0));
  CHECK(g.x_of(20) == doctest::Approx(10.0));
}

TEST_CASE("2D disk obstacle: nodes within distance 1.2 are masked") {
  DomainSpec s = spec_2d();
  s.obstacles = {{0.0, 0.0, 1.2}};
  GridMask g = build_grid(s);
  long c = g.mid;
  CHECK(g.kind[g.at(c, c)] == NodeKind::Obstacle);
  CHECK(g.kind[g.at(c + 1, c)] == NodeKind::Obstacle);
  CHECK(g.kind[g.at(c - 1, c)] == NodeKind::Obstacle);
  CHECK(g.kind[g.at(c, c + 1)] == NodeKind::Obstacle);
  CHECK(g.kind[g.at(c, c - 1)] == NodeKind::Obstacle);
  CHECK(g.kind[g.at(c + 1, c + 1)] == NodeKind::Interior); // sqrt(2) > 1.2
  CHECK(g.kind[g.at(c + 2, c)] == NodeKind::Interior);
}

TEST_CASE("obstacle not inside B_r0 is rejected") {
  DomainSpec s = spec_2d();
  s.damper_radius = 1.0;
  s.support_radius = 3.0;
  s.obstacles = {{0.0, 0.0, 1.2}};
  CHECK_THROWS_AS(build_grid(s), Error);
}

TEST_CASE("degenerate specs are rejected") {
  DomainSpec s = spec_2d();
  s.spacing = -0.1;
  CHECK_THROWS_AS(build_grid(s), Error);

  DomainSpec s2 = spec_2d(1.0, 1.0);
  s2.damper_radius = 0.95;
  s2.support_radius = 0.9;
  s2.obstacles = {{0.0, 0.0, 0.9}}; // swallows the only interior node
  CHECK_THROWS_AS(build_grid(s2), Error);

  DomainSpec s3 = spec_1d();
  s3.obstacles = {{0.0, 0.0, 0.5}}; // no obstacles in 1D
  CHECK_THROWS_AS(build_grid(s3), Error);
}

TEST_CASE("classification is symmetric for a symmetric obstacle") {
  DomainSpec s = spec_2d(4.0, 0.5);
  s.obstacles = {{0.0, 0.0, 1.1}};
  GridMask g = build_grid(s);
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      CHECK(g.kind[g.at(ix, iy)] == g.kind[g.at(g.nx - 1 - ix, iy)]);
      CHECK(g.kind[g.at(ix, iy)] == g.kind[g.at(ix, g.ny - 1 - iy)]);
      CHECK(g.kind[g.at(ix, iy)] == g.kind[g.at(iy, ix)]);
    }
  }
}

TEST_CASE("constant damper is 1 away from obstacle nodes") {
  DomainSpec s = spec_2d(4.0, 0.5);
  s.obstacles = {{0.0, 0.0, 0.6}};
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ConstantOne;
  Field a = sample_damper(d, s, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.kind[i] == NodeKind::Obstacle)
      CHECK(a.v[i] == 0.0);
    else
      CHECK(a.v[i] == 1.0);
  }
}

TEST_CASE("smooth exterior damper: exact 1 outside r0, 0 inside the core") {
  DomainSpec s = spec_2d(6.0, 0.25);
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 1.0;
  Field a = sample_damper(d, s, g);
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      double r = std::hypot(g.x_of(ix), g.y_of(iy));
      double val = a.v[g.at(ix, iy)];
      CHECK(val >= 0.0);
      CHECK(val <= 1.0);
      if (r > 2.0) CHECK(val == 1.0); // exact, node by node
      if (r <= 1.0) CHECK(val == 0.0);
    }
  }
  CHECK(damper_value(d, s, 3.0, 0.0) == 1.0);
  CHECK(damper_value(d, s, 0.5, 0.0) == 0.0);
  double mid = damper_value(d, s, 1.5, 0.0);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}

TEST_CASE("smooth damper with inner radius >= r0 is rejected") {
  DomainSpec s = spec_2d();
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 2.5;
  CHECK_THROWS_AS(sample_damper(d, s, g), Error);
}

TEST_CASE("hole damper: zero inside the hole, one elsewhere, hole confined to B_r0") {
  DomainSpec s = spec_2d(6.0, 0.25);
  s.damper_radius = 3.0;
  s.support_radius = 3.5;
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorWithHole;
  d.hole = {-2.0, 2.0, -0.2, 0.2};
  Field a = sample_damper(d, s, g);
  CHECK(a.v[g.at(g.mid, g.mid)] == 0.0);     // (0,0) in the hole
  CHECK(a.v[g.at(g.mid, g.mid + 8)] == 1.0); // (0,2) outside

  DamperSpec bad = d;
  bad.hole = {-4.0, 4.0, -0.2, 0.2};
  CHECK_THROWS_AS(sample_damper(bad, s, g), Error);
}

TEST_CASE("table damper: validation of size, sign, and exterior value") {
  DomainSpec s = spec_1d(4.0, 1.0);
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::Table;
  d.table.assign(g.size(), 1.0);
  Field a = sample_damper(d, s, g);
  CHECK(a.v[g.at(g.mid, 0)] == 1.0);

  d.table[g.mid] = -0.5;
  CHECK_THROWS_AS(sample_damper(d, s, g), Error);
  d.table[g.mid] = 0.0;
  d.table[0] = 0.7; // node at |x|=4 > r0 must be 1
  CHECK_THROWS_AS(sample_damper(d, s, g), Error);
  d.table.resize(3);
  CHECK_THROWS_AS(sample_damper(d, s, g), Error);
}

TEST_CASE("bilinear damper sampling matches nodes and extends by 1") {
  DomainSpec s = spec_2d(4.0, 0.5);
  GridMask g = build_grid(s);
  DamperSpec d;
  d.kind = DamperKind::ExteriorSmooth;
  d.inner_radius = 1.0;
  Field a = sample_damper(d, s, g);
  DamperSampler smp(a, g);
  for (long iy = 1; iy < g.ny - 1; iy += 3)
    for (long ix = 1; ix < g.nx - 1; ix += 3)
      CHECK(smp(g.x_of(ix), g.y_of(iy)) == doctest::Approx(a.v[g.at(ix, iy)]).epsilon(1e-12));
  CHECK(smp(100.0, 0.0) == 1.0);
}

TEST_CASE("bump initial data: support and kinds") {
  DomainSpec s = spec_2d(4.0, 0.25);
  GridMask g = build_grid(s);
  BumpSpec b;
  b.kind = BumpKind::BumpU0;
  b.cx = 2.0;
  b.cy = 0.0;
  b.width = 0.5;
  auto [u0, u1] = initial_data(b, s, g);
  double sum1 = 0.0;
  for (double v : u1.v) sum1 += std::abs(v);
  CHECK(sum1 == 0.0);
  for (long iy = 0; iy < g.ny; ++iy) {
    for (long ix = 0; ix < g.nx; ++ix) {
      double dist = std::hypot(g.x_of(ix) - 2.0, g.y_of(iy));
      double val = u0.v[g.at(ix, iy)];
      if (dist >= 0.5) CHECK(val == 0.0);
      double r = std::hypot(g.x_of(ix), g.y_of(iy));
      if (r >= s.support_radius) CHECK(val == 0.0);
    }
  }
  CHECK(satisfies_mask(u0, g));

  BumpSpec both = b;
  both.kind = BumpKind::BumpBoth;
  auto [v0, v1] = initial_data(both, s, g);
  double n0 = 0.0, n1 = 0.0;
  for (double v : v0.v) n0 += v * v;
  for (double v : v1.v) n1 += v * v;
  CHECK(n0 > 0.0);
  CHECK(n1 > 0.0);
}

TEST_CASE("bump leaving B_r1 or touching an obstacle is rejected") {
  DomainSpec s = spec_2d(4.0, 0.25);
  GridMask g = build_grid(s);
  BumpSpec b;
  b.kind = BumpKind::BumpU1;
  b.cx = 2.8;
  b.width = 0.5; // 2.8 + 0.5 > r1 = 3
  CHECK_THROWS_AS(initial_data(b, s, g), Error);

  DomainSpec so = s;
  so.obstacles = {{0.0, 0.0, 0.5}};
  GridMask go = build_grid(so);
  BumpSpec bo;
  bo.kind = BumpKind::BumpU0;
  bo.cx = 0.8;
  bo.width = 0.5; // overlaps the disk of radius 0.5
  CHECK_THROWS_AS(initial_data(bo, so, go), Error);
}
