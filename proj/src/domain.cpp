#include "declab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace declab {

namespace {
constexpr const char* kModule = "exterior-domain";

double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }
} // namespace

long DomainSpec::cells_per_halfaxis() const {
  // Guard against R/h landing just below an integer in floating point.
  return static_cast<long>(std::floor(box_halfwidth / spacing + 1e-9));
}

void DomainSpec::validate() const {
  if (dim != 1 && dim != 2)
    throw Error(Errc::SpecInvalid, kModule, "dimension must be 1 or 2, got " + std::to_string(dim));
  if (spacing <= 0.0)
    throw Error(Errc::SpecInvalid, kModule, "grid spacing must be positive");
  if (damper_radius <= 0.0 || support_radius <= 0.0)
    throw Error(Errc::SpecInvalid, kModule, "r0 and r1 must be positive");
  if (box_halfwidth <= support_radius || box_halfwidth <= damper_radius)
    throw Error(Errc::SpecInvalid, kModule, "box halfwidth must exceed r0 and r1");
  if (dim == 1 && !obstacles.empty())
    throw Error(Errc::SpecInvalid, kModule, "obstacles are only supported in 2D");
  for (const auto& o : obstacles) {
    if (o.radius <= 0.0)
      throw Error(Errc::SpecInvalid, kModule, "obstacle radius must be positive");
    // every obstacle strictly inside the ball of radius r0
    if (hypot2(o.cx, o.cy) + o.radius >= damper_radius)
      throw Error(Errc::SpecInvalid, kModule, "obstacle is not strictly contained in B_r0");
  }
}

GridMask build_grid(const DomainSpec& spec) {
  spec.validate();
  GridMask g;
  g.dim = spec.dim;
  g.h = spec.spacing;
  g.mid = spec.cells_per_halfaxis();
  g.nx = spec.nodes_per_axis();
  g.ny = spec.dim == 2 ? g.nx : 1;
  g.kind.assign(g.size(), NodeKind::Interior);

  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      double x = g.x_of(ix);
      NodeKind k = NodeKind::Interior;
      bool outer = (ix == 0 || ix == g.nx - 1);
      if (g.dim == 2) outer = outer || (iy == 0 || iy == g.ny - 1);
      if (outer) {
        k = NodeKind::OuterBoundary;
      } else {
        for (const auto& o : spec.obstacles) {
          if (o.contains(x, y)) {
            k = NodeKind::Obstacle;
            break;
          }
        }
      }
      g.kind[g.at(ix, iy)] = k;
      if (k == NodeKind::Interior) ++g.interior_count;
    }
  }
  if (g.interior_count == 0)
    throw Error(Errc::SpecInvalid, kModule, "grid has no interior node");
  return g;
}

void apply_mask(Field& f, const GridMask& g) {
  if (f.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "field size does not match grid");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (g.kind[i] != NodeKind::Interior) f.v[i] = 0.0;
}

bool satisfies_mask(const Field& f, const GridMask& g) {
  if (f.size() != g.size()) return false;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (g.kind[i] != NodeKind::Interior && f.v[i] != 0.0) return false;
  return true;
}

double bump_value(double dist, double width) {
  double rho = dist / width;
  if (rho >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - rho * rho));
}

double damper_value(const DamperSpec& d, const DomainSpec& spec, double x, double y) {
  double r = spec.dim == 2 ? hypot2(x, y) : std::abs(x);
  switch (d.kind) {
    case DamperKind::ConstantOne:
      return 1.0;
    case DamperKind::ExteriorSmooth: {
      double r0 = spec.damper_radius;
      if (r > r0) return 1.0;
      if (r <= d.inner_radius) return 0.0;
      double rho = (r0 - r) / (r0 - d.inner_radius);
      if (rho >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
    }
    case DamperKind::ExteriorWithHole:
      return d.hole.contains(x, y) ? 0.0 : 1.0;
    case DamperKind::Table:
      throw Error(Errc::SpecInvalid, kModule, "table damper has no off-grid profile");
  }
  return 1.0;
}

Field sample_damper(const DamperSpec& d, const DomainSpec& spec, const GridMask& g) {
  const double r0 = spec.damper_radius;
  if (d.kind == DamperKind::ExteriorSmooth && d.inner_radius >= r0)
    throw Error(Errc::SpecInvalid, kModule, "damper inner radius must be below r0");
  if (d.kind == DamperKind::ExteriorWithHole) {
    // hole confined to B_r0 so that a == 1 for |x| > r0 stays exact
    double cx[2] = {d.hole.x0, d.hole.x1};
    double cy[2] = {d.hole.y0, d.hole.y1};
    for (double x : cx)
      for (double y : cy)
        if (hypot2(x, spec.dim == 2 ? y : 0.0) > r0)
          throw Error(Errc::SpecInvalid, kModule, "damper hole must stay inside B_r0");
  }
  if (d.kind == DamperKind::Table) {
    if (d.table.size() != g.size())
      throw Error(Errc::SpecInvalid, kModule, "damper table size does not match grid");
    for (std::size_t i = 0; i < d.table.size(); ++i)
      if (d.table[i] < 0.0)
        throw Error(Errc::SpecInvalid, kModule, "damper table value is negative");
  }

  Field a(g.size(), 0.0);
  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      double x = g.x_of(ix);
      double r = spec.dim == 2 ? hypot2(x, y) : std::abs(x);
      if (g.kind[i] == NodeKind::Obstacle) {
        a.v[i] = 0.0;
        continue;
      }
      double val = d.kind == DamperKind::Table ? d.table[i] : damper_value(d, spec, x, y);
      // exactness contract outside the transition radius
      if (r > r0) {
        if (d.kind == DamperKind::Table && val != 1.0)
          throw Error(Errc::SpecInvalid, kModule, "table damper must equal 1 outside r0");
        val = 1.0;
      }
      a.v[i] = val;
    }
  }
  return a;
}

DamperSampler::DamperSampler(const Field& a, const GridMask& g) : a_(a), g_(g) {
  if (a.size() != g.size())
    throw Error(Errc::ShapeMismatch, kModule, "damper field size does not match grid");
}

double DamperSampler::operator()(double x, double y) const {
  double fx = x / g_.h + g_.mid;
  double fy = g_.dim == 2 ? y / g_.h + g_.mid : 0.0;
  if (fx < 0.0 || fx > g_.nx - 1 || (g_.dim == 2 && (fy < 0.0 || fy > g_.ny - 1)))
    return 1.0; // all damper kinds equal 1 beyond the box
  long ix = std::min(static_cast<long>(fx), g_.nx - 2 >= 0 ? g_.nx - 2 : 0);
  double tx = fx - ix;
  if (g_.dim == 1) {
    return (1.0 - tx) * a_.v[g_.at(ix, 0)] + tx * a_.v[g_.at(ix + 1, 0)];
  }
  long iy = std::min(static_cast<long>(fy), g_.ny - 2);
  double ty = fy - iy;
  double v00 = a_.v[g_.at(ix, iy)], v10 = a_.v[g_.at(ix + 1, iy)];
  double v01 = a_.v[g_.at(ix, iy + 1)], v11 = a_.v[g_.at(ix + 1, iy + 1)];
  return (1.0 - tx) * (1.0 - ty) * v00 + tx * (1.0 - ty) * v10 + (1.0 - tx) * ty * v01 +
         tx * ty * v11;
}

std::pair<Field, Field> initial_data(const BumpSpec& b, const DomainSpec& spec, const GridMask& g) {
  double cr = spec.dim == 2 ? hypot2(b.cx, b.cy) : std::abs(b.cx);
  if (b.width <= 0.0)
    throw Error(Errc::SpecInvalid, kModule, "bump width must be positive");
  if (cr + b.width > spec.support_radius)
    throw Error(Errc::SpecInvalid, kModule, "bump support leaves B_r1");
  for (const auto& o : spec.obstacles) {
    double d = hypot2(b.cx - o.cx, b.cy - o.cy);
    if (d < o.radius + b.width)
      throw Error(Errc::SpecInvalid, kModule, "bump support intersects an obstacle");
  }

  Field u0(g.size(), 0.0), u1(g.size(), 0.0);
  for (long iy = 0; iy < g.ny; ++iy) {
    double y = g.y_of(iy);
    for (long ix = 0; ix < g.nx; ++ix) {
      std::size_t i = g.at(ix, iy);
      if (g.kind[i] != NodeKind::Interior) continue;
      double x = g.x_of(ix);
      double dist = spec.dim == 2 ? hypot2(x - b.cx, y - b.cy) : std::abs(x - b.cx);
      double val = bump_value(dist, b.width);
      if (b.kind == BumpKind::BumpU0 || b.kind == BumpKind::BumpBoth) u0.v[i] = val;
      if (b.kind == BumpKind::BumpU1 || b.kind == BumpKind::BumpBoth) u1.v[i] = val;
    }
  }
  return {std::move(u0), std::move(u1)};
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::SpecInvalid: return "SPEC_INVALID";
    case Errc::GeometryDegenerate: return "GEOMETRY_DEGENERATE";
    case Errc::Blowup: return "BLOWUP";
    case Errc::ShapeMismatch: return "SHAPE_MISMATCH";
    case Errc::RadiusOutOfRange: return "RADIUS_OUT_OF_RANGE";
    case Errc::NonpositiveData: return "NONPOSITIVE_DATA";
    case Errc::HypothesisViolated: return "HYPOTHESIS_VIOLATED";
    case Errc::SolverStagnated: return "SOLVER_STAGNATED";
    case Errc::ParseError: return "PARSE_ERROR";
    case Errc::ValidationError: return "VALIDATION_ERROR";
    case Errc::PlotError: return "PLOT_ERROR";
    case Errc::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

} // namespace declab
