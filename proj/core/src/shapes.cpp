#include "specstab/geom/shapes.hpp"

#include <cmath>
#include <utility>

namespace specstab::geom {

struct ShapeSpec::Node {
  enum class Kind { Disk, Rect, Polygon, Union, Intersect, Subtract, Translate } kind;
  Point a{}, b{};
  double radius = 0.0;
  std::vector<Point> verts;
  Vec2 shift{};
  std::shared_ptr<const Node> left, right;
};

namespace {

bool point_in_polygon(const std::vector<Point>& v, Point p) {
  bool inside = false;
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    bool crosses = (v[i].y > p.y) != (v[j].y > p.y);
    if (crosses) {
      double x = v[j].x + (p.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool eval(const ShapeSpec::Node* n, Point p) {
  using K = ShapeSpec::Node::Kind;
  switch (n->kind) {
    case K::Disk: {
      Vec2 d{p.x - n->a.x, p.y - n->a.y};
      return d.norm2() < n->radius * n->radius;
    }
    case K::Rect:
      return p.x > n->a.x && p.x < n->b.x && p.y > n->a.y && p.y < n->b.y;
    case K::Polygon:
      return point_in_polygon(n->verts, p);
    case K::Union:
      return eval(n->left.get(), p) || eval(n->right.get(), p);
    case K::Intersect:
      return eval(n->left.get(), p) && eval(n->right.get(), p);
    case K::Subtract:
      return eval(n->left.get(), p) && !eval(n->right.get(), p);
    case K::Translate:
      return eval(n->left.get(), Point{p.x - n->shift.x, p.y - n->shift.y});
  }
  return false;
}

}  // namespace

bool ShapeSpec::contains(Point p) const {
  if (!root_) return false;
  return eval(root_.get(), p);
}

ShapeSpec ShapeSpec::disk(Point center, double radius) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Disk;
  n->a = center;
  n->radius = radius;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::rectangle(Point lo, Point hi) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Rect;
  n->a = lo;
  n->b = hi;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw DomainError("polygon needs at least 3 vertices");
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Polygon;
  n->verts = std::move(vertices);
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::unite(ShapeSpec a, ShapeSpec b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Union;
  n->left = a.root_;
  n->right = b.root_;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::intersect(ShapeSpec a, ShapeSpec b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Intersect;
  n->left = a.root_;
  n->right = b.root_;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::subtract(ShapeSpec a, ShapeSpec b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Subtract;
  n->left = a.root_;
  n->right = b.root_;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

ShapeSpec ShapeSpec::translate(ShapeSpec a, Vec2 shift) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Translate;
  n->shift = shift;
  n->left = a.root_;
  ShapeSpec s;
  s.root_ = std::move(n);
  return s;
}

RasterSet rasterize(const ShapeSpec& shape, const GridGeometry& grid) {
  RasterSet out = RasterSet::empty(grid);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (shape.contains(grid.center(i, j))) out.set(i, j, true);
  out.require_nonempty("rasterize");
  out.require_margin("rasterize");
  return out;
}

double graph_value(const std::vector<double>& g_samples, double t) {
  if (g_samples.empty()) throw DomainError("graph has no samples");
  if (g_samples.size() == 1) return g_samples[0];
  double s = t * static_cast<double>(g_samples.size() - 1);
  if (s <= 0.0) return g_samples.front();
  if (s >= static_cast<double>(g_samples.size() - 1)) return g_samples.back();
  auto k = static_cast<size_t>(std::floor(s));
  double frac = s - static_cast<double>(k);
  return g_samples[k] * (1.0 - frac) + g_samples[k + 1] * frac;
}

RasterSet from_boundary_graph(const std::vector<double>& g_samples, GraphSide side,
                              const Modulus& m, double C, const GridGeometry& grid) {
  if (g_samples.size() < 2) throw DomainError("boundary graph needs at least two samples");
  if (C < 0.0) throw DomainError("declared modulus multiplier must be >= 0");
  const size_t ns = g_samples.size();
  const double dx = grid.side / static_cast<double>(ns - 1);
  for (size_t i = 0; i < ns; ++i)
    for (size_t j = i + 1; j < ns; ++j) {
      double dist = static_cast<double>(j - i) * dx;
      double bound = C * m(std::min(dist, m.r_max()));
      if (std::abs(g_samples[i] - g_samples[j]) > bound + 1e-12 * (1.0 + bound))
        throw ModulusError("graph increment exceeds declared C*omega bound");
    }
  RasterSet out = RasterSet::empty(grid);
  for (int j = 1; j + 1 < grid.n; ++j)
    for (int i = 1; i + 1 < grid.n; ++i) {
      Point c = grid.center(i, j);
      double t = (c.x - grid.origin.x) / grid.side;
      double g = graph_value(g_samples, t);
      bool in = (side == GraphSide::Below) ? (c.y < g) : (c.y > g);
      if (in) out.set(i, j, true);
    }
  out.require_nonempty("from_boundary_graph");
  return out;
}

}  // namespace specstab::geom
