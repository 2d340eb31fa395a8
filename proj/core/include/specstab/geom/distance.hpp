#pragma once

#include <limits>
#include <vector>

#include "specstab/geom/raster.hpp"

namespace specstab::geom {

// Squared Euclidean distance, in integer cell units, from every grid cell to
// the nearest member cell of X (exact; values are integers stored in double).
// All entries are kInfiniteDist when X is empty.
inline constexpr double kInfiniteDist = std::numeric_limits<double>::infinity();
std::vector<double> squared_cell_distances(const RasterSet& X);

// Distance from an arbitrary physical point to the nearest sample of X
// (+inf if X is empty).  Exact scan over a window large enough to contain
// the nearest sample.
double point_set_distance(Point p, const RasterSet& X);

// One-sided gap e(X,Y) = sup over X-samples of the distance to Y-samples.
// Conventions: e(empty, Y) = 0; e(X, empty) = +inf for nonempty X.
double gap(const RasterSet& X, const RasterSet& Y);

// co-gap: e(box\Y, box\X), complements taken within the ambient box.
double co_gap(const RasterSet& X, const RasterSet& Y);

struct HausdorffDistances {
  double d_H;      // max{e(X,Y), e(Y,X)} on the sample sets
  double d_open;   // max{co_gap(X,Y), co_gap(Y,X)}
  double d_HP;     // max{d_H, d_open}
  double d_HS;     // min{e(XdY,bdY), e(XdY,bdX), d_H, d_open}, e(empty,.)=0
};

// Throws EmptyDomain when either input is empty.
HausdorffDistances hausdorff_distances(const RasterSet& X, const RasterSet& Y);

}  // namespace specstab::geom
