#include "specstab/lab/family.hpp"

#include <algorithm>
#include <cmath>

#include "specstab/geom/morphology.hpp"

namespace specstab::lab {

using geom::GridGeometry;
using geom::RasterSet;

namespace {

// Unit-modulus profile on [0, 1], zero at both ends: |b(s) - b(t)| <=
// omega_unit(|s - t|) with max b = omega_unit(1/2).
double profile_value(const geom::Modulus& unit, double s) {
  const double t = std::clamp(s, 0.0, 1.0);
  return unit(std::min(t, 1.0 - t));
}

RasterSet shift_cells(const RasterSet& x, int di, int dj) {
  const GridGeometry& g = x.grid();
  RasterSet out = RasterSet::empty(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (x.at(i, j)) {
        const int ii = i + di, jj = j + dj;
        if (!g.in_range(ii, jj))
          throw MarginError("translated member leaves the grid");
        out.set(ii, jj, true);
      }
  return out;
}

}  // namespace

PerturbationFamily::PerturbationFamily(FamilySpec spec, GridGeometry grid)
    : spec_(std::move(spec)), grid_(grid) {
  if (spec_.schedule.empty()) throw DomainError("family schedule is empty");
  for (std::size_t i = 0; i < spec_.schedule.size(); ++i) {
    if (!(spec_.schedule[i] >= 0.0)) throw DomainError("family schedule entries must be >= 0");
    if (i > 0 && !(spec_.schedule[i] < spec_.schedule[i - 1]))
      throw DomainError("family schedule must be strictly decreasing");
  }
  if (spec_.kind == FamilyKind::BoundaryBump) {
    if (!(spec_.bump_rho > 0.0) || !(spec_.bump_rho <= 1.0))
      throw DomainError("bump width must lie in (0, 1]");
    if (!(spec_.bump_base_level > 0.0) || !(spec_.bump_base_level < 1.0))
      throw DomainError("bump base level must lie in (0, 1)");
  }
  base();  // validates the base raster (nonempty, margin)
}

RasterSet PerturbationFamily::member_on(double eps, const GridGeometry& g) const {
  if (!(eps >= 0.0)) throw DomainError("family parameter must be >= 0");
  const double h = g.h();
  RasterSet out = RasterSet::empty(g);
  switch (spec_.kind) {
    case FamilyKind::Erode: {
      RasterSet base = geom::rasterize(spec_.base, g);
      // Radius eps + h/2 removes exactly eps/h layers for lattice-aligned eps.
      out = eps == 0.0 ? base : geom::erode(base, eps + 0.5 * h);
      break;
    }
    case FamilyKind::Dilate: {
      RasterSet base = geom::rasterize(spec_.base, g);
      out = eps == 0.0 ? base : geom::dilate(base, eps + 0.5 * h);
      break;
    }
    case FamilyKind::Translate: {
      RasterSet base = geom::rasterize(spec_.base, g);
      out = shift_cells(base, static_cast<int>(std::llround(eps / h)), 0);
      break;
    }
    case FamilyKind::BoundaryBump: {
      const int ns = 513;
      const double side = g.side;
      const double rho = spec_.bump_rho * side;
      const double x0 = g.origin.x + 0.5 * (side - rho);
      const double base_y = g.origin.y + spec_.bump_base_level * side;
      std::vector<double> samples(ns);
      double top = base_y;
      for (int i = 0; i < ns; ++i) {
        const double x = g.origin.x + side * i / (ns - 1);
        samples[i] = base_y + eps * profile_value(spec_.profile_modulus, (x - x0) / rho);
        top = std::max(top, samples[i]);
      }
      if (top > g.origin.y + side - 2.0 * h)
        throw MarginError("bump member reaches the frame");
      const double c = eps > 0.0 ? eps / spec_.profile_modulus(rho) : 0.0;
      out = geom::from_boundary_graph(samples, geom::GraphSide::Below, spec_.profile_modulus, c, g);
      break;
    }
  }
  out.require_nonempty("family member");
  out.require_margin("family member");
  return out;
}

}  // namespace specstab::lab
