#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include <Eigen/Dense>

#include "specstab/geom/shapes.hpp"
#include "specstab/spectral/eigensolve.hpp"

using namespace specstab::fem;
using namespace specstab::geom;
using namespace specstab::spectral;
using specstab::DomainError;

namespace {

double mu_1d(int m, int cells, double h) {
  double t = m * M_PI / cells;
  return (6.0 / (h * h)) * (1.0 - std::cos(t)) / (2.0 + std::cos(t));
}

// Ascending separable spectrum mu_a + mu_b of the discrete box pencil.
std::vector<double> separable_box_spectrum(int cells, double h, int k) {
  std::vector<double> all;
  for (int a = 1; a < cells; ++a)
    for (int b = 1; b < cells; ++b) all.push_back(mu_1d(a, cells, h) + mu_1d(b, cells, h));
  std::sort(all.begin(), all.end());
  all.resize(static_cast<size_t>(k));
  return all;
}

DirichletSystem box_system(const AmbientSystem& amb) {
  return restrict_to(amb, RasterSet::full_box(amb.grid()));
}

}  // namespace

TEST_SUITE_BEGIN("eigensolve");

TEST_CASE("dense path reproduces the separable spectrum exactly") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  EigenResult r = eigens(sys, 6);
  std::vector<double> want = separable_box_spectrum(16, g.h(), 6);
  REQUIRE(r.values.size() == 6);
  for (int i = 0; i < 6; ++i)
    CHECK(r.values[i] == doctest::Approx(want[static_cast<size_t>(i)]).epsilon(1e-10));
  for (int i = 0; i < 6; ++i) CHECK(r.residuals[i] <= 1e-8);
}

TEST_CASE("eigenvectors come back mass-orthonormal") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  EigenResult r = eigens(sys, 5);
  Eigen::MatrixXd gram = r.vectors.transpose() * (sys.M() * r.vectors);
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-8);
}

TEST_CASE("degenerate pairs share a cluster label") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  EigenResult r = eigens(sys, 4);
  // Spectrum 2mu1 < mu1+mu2 = mu2+mu1 < 2mu2.
  CHECK(r.cluster[0] == 0);
  CHECK(r.cluster[1] == 1);
  CHECK(r.cluster[2] == 1);
  CHECK(r.cluster[3] == 2);
  CHECK(r.distinct_clusters() == 3);
  CHECK(r.cluster_members(1) == std::vector<int>{1, 2});
}

TEST_CASE("iterative path above the dense threshold matches the formula") {
  GridGeometry g({0.0, 0.0}, 1.0, 40);  // 39^2 = 1521 unknowns > dense threshold
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  REQUIRE(sys.size() > EigenOptions{}.dense_threshold);
  EigenResult r = eigens(sys, 4);
  std::vector<double> want = separable_box_spectrum(40, g.h(), 4);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(r.values[i] - want[static_cast<size_t>(i)]) <=
          1e-7 * want[static_cast<size_t>(i)]);
  for (int i = 0; i < 4; ++i) CHECK(r.residuals[i] <= 1e-8);
}

TEST_CASE("fixed seeds make the iterative solve reproducible bit for bit") {
  GridGeometry g({0.0, 0.0}, 1.0, 40);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  EigenOptions opts;
  opts.seed = 12345;
  EigenResult a = eigens(sys, 3, opts);
  EigenResult b = eigens(sys, 3, opts);
  CHECK((a.values - b.values).norm() == 0.0);
  CHECK((a.vectors - b.vectors).norm() == 0.0);
}

TEST_CASE("restricted sub-square system equals the standalone box of its size") {
  // Cells 4..11 of the 16-cell unit grid form the square (0.25, 0.75)^2, so
  // the restriction is algebraically the 8-cell box system of side 0.5.
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sub =
      restrict_to(amb, rasterize(ShapeSpec::rectangle({0.25, 0.25}, {0.75, 0.75}), g));
  EigenResult r = eigens(sub, 3);
  std::vector<double> want = separable_box_spectrum(8, g.h(), 3);
  for (int i = 0; i < 3; ++i)
    CHECK(r.values[i] == doctest::Approx(want[static_cast<size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("domain inclusion raises the principal eigenvalue") {
  GridGeometry g({0.0, 0.0}, 1.0, 24);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem big = box_system(amb);
  DirichletSystem small =
      restrict_to(amb, rasterize(ShapeSpec::rectangle({0.25, 0.25}, {0.75, 0.75}), g));
  CHECK(eigens(small, 1).values[0] > eigens(big, 1).values[0]);
}

TEST_CASE("anisotropic coefficients split the degenerate pair") {
  GridGeometry g({0.0, 0.0}, 1.0, 16);
  AmbientSystem amb(g, CoefficientField::diagonal(1.0, 4.0));
  DirichletSystem sys = box_system(amb);
  EigenResult r = eigens(sys, 4);
  // Separable candidates lambda_{ab} = mu_a + 4 mu_b, sorted; the stretched
  // direction pushes (1,2) past both (2,1) and (3,1).
  double h = g.h();
  std::vector<double> want;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) want.push_back(mu_1d(a, 16, h) + 4.0 * mu_1d(b, 16, h));
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 4; ++i)
    CHECK(r.values[i] == doctest::Approx(want[size_t(i)]).epsilon(1e-10));
  CHECK(want[2] == doctest::Approx(mu_1d(3, 16, h) + 4.0 * mu_1d(1, 16, h)).epsilon(1e-14));
  CHECK(want[3] == doctest::Approx(mu_1d(1, 16, h) + 4.0 * mu_1d(2, 16, h)).epsilon(1e-14));
  CHECK(r.distinct_clusters() == 4);
}

TEST_CASE("requested counts outside the space are rejected") {
  GridGeometry g({0.0, 0.0}, 1.0, 8);
  AmbientSystem amb(g, CoefficientField::identity());
  DirichletSystem sys = box_system(amb);
  CHECK_THROWS_AS(eigens(sys, 0), DomainError);
  CHECK_THROWS_AS(eigens(sys, sys.size() + 1), DomainError);
  EigenResult full = eigens(sys, sys.size());
  CHECK(full.values.size() == sys.size());
}

TEST_SUITE_END();
