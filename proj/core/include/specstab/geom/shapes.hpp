#pragma once

#include <memory>
#include <vector>

#include "specstab/geom/modulus.hpp"
#include "specstab/geom/raster.hpp"

namespace specstab::geom {

// Closed-form open shapes with point membership, combinable by boolean
// operations.  Rasterization samples cell centers.
class ShapeSpec {
 public:
  static ShapeSpec disk(Point center, double radius);
  static ShapeSpec rectangle(Point lo, Point hi);
  // Simple polygon, even-odd rule on the open interior.
  static ShapeSpec polygon(std::vector<Point> vertices);
  static ShapeSpec unite(ShapeSpec a, ShapeSpec b);
  static ShapeSpec intersect(ShapeSpec a, ShapeSpec b);
  static ShapeSpec subtract(ShapeSpec a, ShapeSpec b);
  static ShapeSpec translate(ShapeSpec a, Vec2 shift);

  bool contains(Point p) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

// Cell included iff its center lies in the open shape.
// Empty result -> EmptyDomain; touching the one-cell frame -> MarginError.
RasterSet rasterize(const ShapeSpec& shape, const GridGeometry& grid);

enum class GraphSide { Below, Above };

// Domain bounded by the graph of g over the box's x-extent.  g_samples are
// values at the uniform parameter lattice t_i = i/(len-1), t in [0,1] mapped
// to physical x; values are physical y coordinates.  Validates the sampled
// increments |g(a)-g(b)| <= C*omega(|x_a-x_b|); violation -> ModulusError.
// The sub/epigraph is clipped to keep the one-cell frame margin.
RasterSet from_boundary_graph(const std::vector<double>& g_samples, GraphSide side,
                              const Modulus& m, double C, const GridGeometry& grid);

// Evaluate the piecewise-linear interpolant of g_samples at parameter t in [0,1].
double graph_value(const std::vector<double>& g_samples, double t);

}  // namespace specstab::geom
