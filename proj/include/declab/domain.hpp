#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "declab/error.hpp"

namespace declab {

struct Disk {
  double cx = 0.0, cy = 0.0, radius = 0.0;
  bool contains(double x, double y) const {
    double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= radius * radius;
  }
  bool operator==(const Disk&) const = default;
};

// Truncated exterior domain: a box [-R,R]^N with Dirichlet walls, minus a set
// of disk obstacles. The damper equals one outside |x| > damper_radius and the
// initial data are supported inside |x| < support_radius.
struct DomainSpec {
  int dim = 2;                  // 1 or 2
  double box_halfwidth = 10.0;  // R_box
  double spacing = 0.1;         // h
  std::vector<Disk> obstacles;  // empty = free space
  double damper_radius = 2.0;   // r0
  double support_radius = 3.0;  // r1

  long cells_per_halfaxis() const;
  long nodes_per_axis() const { return 2 * cells_per_halfaxis() + 1; }
  void validate() const; // throws Error(SpecInvalid)
};

enum class NodeKind : std::uint8_t { Interior = 0, Obstacle = 1, OuterBoundary = 2 };

struct GridMask {
  int dim = 2;
  long nx = 0, ny = 0; // ny == 1 in 1D
  double h = 0.0;
  long mid = 0; // center index along each axis; x = (ix - mid) * h
  std::vector<NodeKind> kind;
  long interior_count = 0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t at(long ix, long iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
  double x_of(long ix) const { return (ix - mid) * h; }
  double y_of(long iy) const { return dim == 2 ? (iy - mid) * h : 0.0; }
  bool is_interior(std::size_t i) const { return kind[i] == NodeKind::Interior; }
};

// Scalar grid function, flat storage matching GridMask::size().
struct Field {
  std::vector<double> v;

  Field() = default;
  explicit Field(std::size_t n, double init = 0.0) : v(n, init) {}
  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

struct CField {
  std::vector<std::complex<double>> v;

  CField() = default;
  explicit CField(std::size_t n, std::complex<double> init = {}) : v(n, init) {}
  std::size_t size() const { return v.size(); }
  std::complex<double>& operator[](std::size_t i) { return v[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return v[i]; }
};

GridMask build_grid(const DomainSpec& spec);

// Zero a field on obstacle and outer-boundary nodes (Dirichlet mask).
void apply_mask(Field& f, const GridMask& g);
bool satisfies_mask(const Field& f, const GridMask& g);

enum class DamperKind { ConstantOne, ExteriorSmooth, ExteriorWithHole, Table };

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  bool operator==(const Rect&) const = default;
};

struct DamperSpec {
  DamperKind kind = DamperKind::ConstantOne;
  double inner_radius = 1.0; // ExteriorSmooth: a == 0 for |x| <= inner_radius
  Rect hole;                 // ExteriorWithHole: a == 0 inside, 1 elsewhere
  std::vector<double> table; // Table: one value per node
};

// Pointwise damper profile; usable off-grid (ray tracing) and for sampling.
double damper_value(const DamperSpec& d, const DomainSpec& spec, double x, double y);

Field sample_damper(const DamperSpec& d, const DomainSpec& spec, const GridMask& g);

// Bilinear interpolation of a sampled damper, extended by 1 outside the box.
class DamperSampler {
public:
  DamperSampler(const Field& a, const GridMask& g);
  double operator()(double x, double y) const;

private:
  const Field& a_;
  const GridMask& g_;
};

enum class BumpKind { BumpU0, BumpU1, BumpBoth };

struct BumpSpec {
  BumpKind kind = BumpKind::BumpU0;
  double cx = 0.0, cy = 0.0; // bump center
  double width = 0.5;        // support radius
};

// Compactly supported radial bump, identically zero outside |x - c| >= width.
double bump_value(double dist, double width);

std::pair<Field, Field> initial_data(const BumpSpec& b, const DomainSpec& spec, const GridMask& g);

} // namespace declab
