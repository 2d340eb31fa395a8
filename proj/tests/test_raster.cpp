#include <vector>

#include <doctest.h>

#include "specstab/geom/raster.hpp"
#include "specstab/geom/shapes.hpp"

using namespace specstab::geom;
using specstab::DomainError;
using specstab::EmptyDomain;
using specstab::MarginError;

namespace {
GridGeometry unit_grid(int n) { return GridGeometry({0.0, 0.0}, 1.0, n); }
}  // namespace

TEST_SUITE_BEGIN("raster");

TEST_CASE("full box and empty factories expose their designated states") {
  GridGeometry g = unit_grid(8);
  RasterSet full = RasterSet::full_box(g);
  CHECK(full.count() == 64);
  CHECK(full.is_full());
  CHECK(full.touches_frame());
  CHECK(full.margin() == doctest::Approx(g.h() / 2).epsilon(1e-15));

  RasterSet none = RasterSet::empty(g);
  CHECK(none.empty_set());
  CHECK(none.count() == 0);
  CHECK(none.margin() == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(none.require_nonempty("test"), EmptyDomain);
}

TEST_CASE("rasterization keeps exactly the cells whose centers lie inside") {
  GridGeometry g = unit_grid(8);
  RasterSet r = rasterize(ShapeSpec::rectangle({0.25, 0.25}, {0.75, 0.75}), g);
  // Centers (i + 0.5)/8 inside the open square for i in {2, 3, 4, 5}.
  CHECK(r.count() == 16);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) {
      bool expect = i >= 2 && i <= 5 && j >= 2 && j <= 5;
      CHECK(r.at(i, j) == expect);
    }
  CHECK_FALSE(r.at_clipped(-1, 3));
  CHECK_FALSE(r.at_clipped(3, 8));
  CHECK(r.at_clipped(3, 3));
}

TEST_CASE("single-cell margin is the distance from its center to the frame") {
  GridGeometry g = unit_grid(8);
  RasterSet r = RasterSet::empty(g);
  r.set(2, 3, true);
  CHECK(r.count() == 1);
  CHECK(r.margin() == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK_FALSE(r.touches_frame());
  r.set(0, 5, true);
  CHECK(r.touches_frame());
  CHECK_THROWS_AS(r.require_margin("test"), MarginError);
}

TEST_CASE("boundary rings enumerate the 8-adjacent layers of a block") {
  GridGeometry g = unit_grid(16);
  RasterSet r = rasterize(ShapeSpec::rectangle({0.25, 0.25}, {0.5, 0.5}), g);
  CHECK(r.count() == 16);  // 4x4 block, cells 4..7 in each axis
  RasterSet inner = r.inner_boundary();
  RasterSet outer = r.outer_boundary();
  CHECK(inner.count() == 12);  // block minus its 2x2 core
  CHECK(outer.count() == 20);  // 6x6 ring around the block
  CHECK(r.boundary().count() == 32);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      bool in_block = i >= 4 && i <= 7 && j >= 4 && j <= 7;
      bool in_core = i >= 5 && i <= 6 && j >= 5 && j <= 6;
      bool in_ring = i >= 3 && i <= 8 && j >= 3 && j <= 8 && !in_block;
      CHECK(inner.at(i, j) == (in_block && !in_core));
      CHECK(outer.at(i, j) == in_ring);
    }
}

TEST_CASE("set algebra matches the mask-level truth table") {
  GridGeometry g = unit_grid(10);
  RasterSet a = rasterize(ShapeSpec::rectangle({0.1, 0.1}, {0.6, 0.6}), g);
  RasterSet b = rasterize(ShapeSpec::rectangle({0.4, 0.4}, {0.9, 0.9}), g);
  RasterSet u = a.set_union(b);
  RasterSet i = a.set_intersection(b);
  RasterSet d = a.set_difference(b);
  RasterSet s = a.symmetric_difference(b);
  RasterSet c = a.complement();
  for (int q = 0; q < g.cell_count(); ++q) {
    bool av = a.mask()[static_cast<size_t>(q)] != 0;
    bool bv = b.mask()[static_cast<size_t>(q)] != 0;
    CHECK((u.mask()[static_cast<size_t>(q)] != 0) == (av || bv));
    CHECK((i.mask()[static_cast<size_t>(q)] != 0) == (av && bv));
    CHECK((d.mask()[static_cast<size_t>(q)] != 0) == (av && !bv));
    CHECK((s.mask()[static_cast<size_t>(q)] != 0) == (av != bv));
    CHECK((c.mask()[static_cast<size_t>(q)] != 0) == !av);
  }
  CHECK(u.count() + i.count() == a.count() + b.count());
  CHECK(s.count() == u.count() - i.count());

  RasterSet other_grid = RasterSet::full_box(unit_grid(12));
  CHECK_THROWS_AS(a.set_union(other_grid), DomainError);
  CHECK_FALSE(a.same_grid(other_grid));
}

TEST_CASE("points returns one sample per member cell at its center") {
  GridGeometry g = unit_grid(8);
  RasterSet r = RasterSet::empty(g);
  r.set(1, 2, true);
  r.set(6, 6, true);
  std::vector<Point> pts = r.points();
  REQUIRE(pts.size() == 2);
  bool saw_a = false, saw_b = false;
  for (Point p : pts) {
    if (p.x == doctest::Approx(0.1875) && p.y == doctest::Approx(0.3125)) saw_a = true;
    if (p.x == doctest::Approx(0.8125) && p.y == doctest::Approx(0.8125)) saw_b = true;
  }
  CHECK(saw_a);
  CHECK(saw_b);
}

TEST_CASE("rasterize rejects empty results and frame contact") {
  GridGeometry g = unit_grid(16);
  CHECK_THROWS_AS(rasterize(ShapeSpec::disk({0.5, 0.5}, 1e-9), g), EmptyDomain);
  // Frame contact without full coverage is an error; covering the whole box
  // is the one sanctioned frame contact and must equal the full raster.
  CHECK_THROWS_AS(rasterize(ShapeSpec::rectangle({-0.2, -0.2}, {1.2, 0.5}), g), MarginError);
  RasterSet covering = rasterize(ShapeSpec::rectangle({-0.2, -0.2}, {1.2, 1.2}), g);
  CHECK(covering.count() == RasterSet::full_box(g).count());
}

TEST_CASE("shape algebra composes point membership") {
  ShapeSpec ring = ShapeSpec::subtract(ShapeSpec::disk({0.5, 0.5}, 0.4),
                                       ShapeSpec::disk({0.5, 0.5}, 0.2));
  CHECK(ring.contains({0.5, 0.8}));
  CHECK_FALSE(ring.contains({0.5, 0.5}));
  CHECK_FALSE(ring.contains({0.5, 0.95}));

  ShapeSpec moved = ShapeSpec::translate(ShapeSpec::disk({0.0, 0.0}, 0.1), {0.5, 0.5});
  CHECK(moved.contains({0.55, 0.5}));
  CHECK_FALSE(moved.contains({0.05, 0.0}));

  ShapeSpec tri = ShapeSpec::polygon({{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}});
  CHECK(tri.contains({0.5, 0.4}));
  CHECK_FALSE(tri.contains({0.25, 0.7}));
}

TEST_SUITE_END();
