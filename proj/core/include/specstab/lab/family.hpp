#pragma once

#include <vector>

#include "specstab/errors.hpp"
#include "specstab/geom/modulus.hpp"
#include "specstab/geom/raster.hpp"
#include "specstab/geom/shapes.hpp"

namespace specstab::lab {

enum class FamilyKind { Erode, Dilate, Translate, BoundaryBump };

// One-parameter family of perturbed domains Omega_2(eps) around a base
// Omega_1 = member(0).  omega and cusp_r declare the boundary-regularity
// class used for cusp validation and for the (omega(eps) + eps) comparator.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Erode;
  geom::ShapeSpec base = geom::ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25});
  std::vector<double> schedule;  // strictly decreasing eps >= 0
  geom::Modulus omega = geom::Modulus::lipschitz(1.0);
  double cusp_r = 0.05;

  // Boundary-bump families only: region below g(x) = base_level * side +
  // eps * b((x - x0) / rho) with b the unit profile of profile_modulus.
  geom::Modulus profile_modulus = geom::Modulus::lipschitz(1.0);
  double bump_base_level = 0.5;  // fraction of the box side
  double bump_rho = 1.0;         // profile width as a fraction of the box side
};

class PerturbationFamily {
 public:
  PerturbationFamily(FamilySpec spec, geom::GridGeometry grid);

  const FamilySpec& spec() const { return spec_; }
  const geom::GridGeometry& grid() const { return grid_; }

  geom::RasterSet base() const { return member(0.0); }
  geom::RasterSet member(double eps) const { return member_on(eps, grid_); }
  // Same member rasterized on another grid of the same box (resolution studies).
  geom::RasterSet member_on(double eps, const geom::GridGeometry& g) const;

 private:
  FamilySpec spec_;
  geom::GridGeometry grid_;
};

}  // namespace specstab::lab
