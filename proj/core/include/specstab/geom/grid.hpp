#pragma once

#include <cmath>
#include <cstdint>

#include "specstab/errors.hpp"

namespace specstab::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

using Point = Vec2;

// Flat square box [x0, x0+side]^2 split into n x n congruent cells of
// spacing h = side / n. Cell (i, j) covers [x0+ih, x0+(i+1)h] x [y0+jh, ...];
// its sample point is the center. The metric is the exact Euclidean one.
struct GridGeometry {
  Point origin;
  double side = 1.0;
  int n = 1;

  GridGeometry() = default;
  GridGeometry(Point o, double s, int cells) : origin(o), side(s), n(cells) {
    if (!(side > 0.0) || n < 1) throw DomainError("grid needs side > 0 and n >= 1");
  }

  double h() const { return side / n; }
  int cell_count() const { return n * n; }

  int index(int i, int j) const { return j * n + i; }
  bool in_range(int i, int j) const { return i >= 0 && i < n && j >= 0 && j < n; }

  Point center(int i, int j) const {
    double hh = h();
    return {origin.x + (i + 0.5) * hh, origin.y + (j + 0.5) * hh};
  }
  Point node(int i, int j) const {
    double hh = h();
    return {origin.x + i * hh, origin.y + j * hh};
  }

  // Cell containing p (clamped to the box range); used to localize points.
  int cell_i(double x) const {
    int i = static_cast<int>(std::floor((x - origin.x) / h()));
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
  }
  int cell_j(double y) const {
    int j = static_cast<int>(std::floor((y - origin.y) / h()));
    return j < 0 ? 0 : (j >= n ? n - 1 : j);
  }

  bool contains_ball(Point c, double radius) const {
    return c.x - radius >= origin.x && c.x + radius <= origin.x + side &&
           c.y - radius >= origin.y && c.y + radius <= origin.y + side;
  }

  bool operator==(const GridGeometry& o) const {
    return origin.x == o.origin.x && origin.y == o.origin.y && side == o.side && n == o.n;
  }
};

}  // namespace specstab::geom
