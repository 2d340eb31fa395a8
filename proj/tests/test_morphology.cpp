#include <random>

#include <doctest.h>

#include "specstab/geom/morphology.hpp"
#include "specstab/geom/shapes.hpp"
#include "test_support.hpp"

using namespace specstab::geom;
using specstab::MarginError;
using testsupport::random_raster;

namespace {

// Naive open-ball scans on the sample lattice, the documented semantics.
// Cell centers sit on an exact integer lattice, so the scan compares integer
// squared offsets against (eps/h)^2; only the unit conversion is shared with
// the implementation, the all-pairs search is not.
RasterSet brute_dilate(const RasterSet& X, double eps) {
  const GridGeometry& g = X.grid();
  const double t2 = (eps / g.h()) * (eps / g.h());
  RasterSet out = X;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      if (out.at(i, j)) continue;
      for (int jj = 0; jj < g.n && !out.at(i, j); ++jj)
        for (int ii = 0; ii < g.n; ++ii)
          if (X.at(ii, jj) &&
              double((i - ii) * (i - ii) + (j - jj) * (j - jj)) < t2) {
            out.set(i, j, true);
            break;
          }
    }
  return out;
}

RasterSet brute_erode(const RasterSet& X, double eps) {
  const GridGeometry& g = X.grid();
  const double t2 = (eps / g.h()) * (eps / g.h());
  RasterSet out = X;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      if (!X.at(i, j)) continue;
      for (int jj = 0; jj < g.n && out.at(i, j); ++jj)
        for (int ii = 0; ii < g.n; ++ii)
          if (!X.at(ii, jj) &&
              double((i - ii) * (i - ii) + (j - jj) * (j - jj)) < t2) {
            out.set(i, j, false);
            break;
          }
    }
  return out;
}

bool subset_of(const RasterSet& a, const RasterSet& b) {
  for (size_t q = 0; q < a.mask().size(); ++q)
    if (a.mask()[q] && !b.mask()[q]) return false;
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("morphology");

TEST_CASE("dilation and erosion match the open-ball scan on random sets") {
  std::mt19937_64 rng(201);
  GridGeometry g({0.0, 0.0}, 1.0, 20);
  double h = g.h();
  for (int trial = 0; trial < 8; ++trial) {
    RasterSet X = random_raster(rng, g, 0.12, 4);
    for (double eps : {0.0, 0.7 * h, 1.0 * h, 1.5 * h, 2.2 * h}) {
      CHECK(dilate(X, eps).mask() == brute_dilate(X, eps).mask());
      CHECK(erode(X, eps).mask() == brute_erode(X, eps).mask());
    }
  }
}

TEST_CASE("strict threshold keeps radius-h operations inert on a block") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  double h = g.h();
  RasterSet block = rasterize(ShapeSpec::rectangle({0.25, 0.25}, {0.75, 0.75}), g);
  REQUIRE(block.count() == 64);  // 8x8 block
  CHECK(erode(block, h).mask() == block.mask());    // nearest complement is at exactly h
  CHECK(dilate(block, h).mask() == block.mask());   // nearest outside center at exactly h
  CHECK(erode(block, 0.0).mask() == block.mask());
  CHECK(dilate(block, 0.0).mask() == block.mask());

  RasterSet shrunk = erode(block, 1.5 * h);
  CHECK(shrunk.count() == 36);  // one full layer removed, diagonals included
  RasterSet grown = dilate(block, 1.5 * h);
  CHECK(grown.count() == 100);  // one full layer added
  CHECK(erode(block, 0.6) .empty_set());
}

TEST_CASE("dilation is monotone in radius and argument") {
  std::mt19937_64 rng(202);
  GridGeometry g({0.0, 0.0}, 1.0, 20);
  double h = g.h();
  for (int trial = 0; trial < 6; ++trial) {
    RasterSet X = random_raster(rng, g, 0.10, 5);
    RasterSet Y = X.set_union(random_raster(rng, g, 0.10, 5));
    CHECK(subset_of(dilate(X, 1.2 * h), dilate(X, 2.4 * h)));
    CHECK(subset_of(dilate(X, 1.7 * h), dilate(Y, 1.7 * h)));
    CHECK(subset_of(erode(X, 2.4 * h), erode(X, 1.2 * h)));
    CHECK(subset_of(X, erode(dilate(X, 1.7 * h), 1.7 * h)));
  }
}

TEST_CASE("dilation refuses to touch the ambient frame") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  RasterSet near = rasterize(ShapeSpec::rectangle({0.12, 0.12}, {0.88, 0.88}), g);
  // 2.5 h reaches the frame columns (axis distance 2) but not the frame
  // corners (distance sqrt 8), so the result touches the frame without the
  // full-box exemption kicking in.
  CHECK_THROWS_AS(dilate(near, 2.5 * g.h()), MarginError);
}

TEST_SUITE_END();
