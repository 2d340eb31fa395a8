#include <set>

#include <doctest.h>

#include <Eigen/Dense>

#include "specstab/geom/morphology.hpp"
#include "specstab/geom/shapes.hpp"
#include "specstab/lab/audit.hpp"

using namespace specstab::geom;
using namespace specstab::lab;
using specstab::DomainError;
using specstab::EmptyDomain;
using specstab::InapplicableError;

namespace {

GridGeometry lab_grid(int n) { return GridGeometry({0.0, 0.0}, 1.5, n); }

RasterSet centered_square(const GridGeometry& g) {
  return rasterize(ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25}), g);
}

}  // namespace

TEST_SUITE_BEGIN("audit");

TEST_CASE("report counters follow the tolerance band") {
  AuditReport rep;
  rep.tolerance = 0.1;
  rep.add("wide pass", 1.0, 1.5);
  rep.add("banded", 1.0, 0.95);
  rep.add("failure", 1.0, 0.7);
  rep.finalize();
  CHECK(rep.failures == 1);
  CHECK(rep.banded == 1);
  CHECK(rep.worst_slack == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK_FALSE(rep.pass);
  CHECK(rep.details[0].pass);
  CHECK(rep.details[1].pass);
  CHECK_FALSE(rep.details[2].pass);

  AuditReport empty;
  empty.finalize();
  CHECK(empty.pass);
  CHECK(empty.worst_slack == 0.0);
}

TEST_CASE("solution comparison on an identical pair is exact") {
  GridGeometry g = lab_grid(32);
  RasterSet sq = centered_square(g);
  Eigen::VectorXd f = Eigen::VectorXd::Ones((g.n - 1) * (g.n - 1));
  AuditReport rep = audit_savare(sq, sq, specstab::fem::CoefficientField::identity(), f);
  CHECK(rep.pass);
  CHECK(rep.instances == 1);
  REQUIRE(rep.details.size() == 3);
  for (const AuditCheck& c : rep.details) {
    CHECK(c.lhs == 0.0);  // the two solves are bitwise identical
    CHECK(c.slack >= 0.0);
  }
}

TEST_CASE("solution comparison bounds hold on a nested pair with margin") {
  GridGeometry g = lab_grid(32);
  RasterSet sq = centered_square(g);
  RasterSet shrunk = erode(sq, 2.5 * g.h());
  Eigen::VectorXd f = Eigen::VectorXd::Ones((g.n - 1) * (g.n - 1));
  for (const auto& coeff : {specstab::fem::CoefficientField::identity(),
                            specstab::fem::CoefficientField::diagonal(1.0, 4.0)}) {
    AuditReport rep = audit_savare(sq, shrunk, coeff, f);
    CHECK(rep.pass);
    CHECK(rep.failures == 0);
    REQUIRE(rep.details.size() == 3);
    CHECK(rep.details[0].lhs > 0.0);
    for (const AuditCheck& c : rep.details) CHECK(c.slack >= 0.0);
  }
}

TEST_CASE("solution comparison validates its inputs") {
  GridGeometry g = lab_grid(32);
  RasterSet sq = centered_square(g);
  Eigen::VectorXd f = Eigen::VectorXd::Ones((g.n - 1) * (g.n - 1));
  RasterSet other_grid = centered_square(lab_grid(48));
  CHECK_THROWS_AS(audit_savare(sq, other_grid, specstab::fem::CoefficientField::identity(), f),
                  DomainError);
  Eigen::VectorXd short_f = Eigen::VectorXd::Ones(10);
  CHECK_THROWS_AS(audit_savare(sq, sq, specstab::fem::CoefficientField::identity(), short_f),
                  DomainError);
  RasterSet left = rasterize(ShapeSpec::rectangle({0.2, 0.2}, {0.55, 0.55}), g);
  RasterSet right = rasterize(ShapeSpec::rectangle({0.9, 0.9}, {1.3, 1.3}), g);
  CHECK_THROWS_AS(audit_savare(left, right, specstab::fem::CoefficientField::identity(), f),
                  EmptyDomain);
}

TEST_CASE("seeded comparison batch is clean and reproducible") {
  AuditReport a = savare_suite(6, 9, 32);
  CHECK(a.pass);
  CHECK(a.failures == 0);
  CHECK(a.instances == 6);
  CHECK(a.details.size() == 18);
  CHECK(a.worst_slack >= 0.0);
  AuditReport b = savare_suite(6, 9, 32);
  CHECK(a.worst_slack == b.worst_slack);  // bitwise reproducible
  CHECK_THROWS_AS(savare_suite(0, 9, 32), DomainError);
  CHECK_THROWS_AS(savare_suite(3, 9, 8), DomainError);
}

TEST_CASE("eigenvalue comparison of a domain with itself is tight") {
  GridGeometry g = lab_grid(32);
  RasterSet sq = centered_square(g);
  BirkhoffNumbers nums;
  AuditReport rep =
      audit_birkhoff(sq, sq, specstab::fem::CoefficientField::identity(), 2, &nums);
  CHECK(rep.pass);
  CHECK(nums.An <= 1e-10);
  CHECK(nums.Bn <= 1e-10);
  CHECK(nums.correction <= 1e-8);
  CHECK(nums.p > 0.0);
  REQUIRE(nums.lam1.size() == 2);
  REQUIRE(nums.lam2.size() == 2);
  CHECK(nums.lam1[0] == doctest::Approx(nums.lam2[0]).epsilon(1e-12));
}

TEST_CASE("eigenvalue comparison certifies a mild erosion") {
  // n = 48: two eroded layers keep the mass defect below the box constant;
  // at n = 32 the same erosion is wide enough to void the hypothesis.
  GridGeometry g = lab_grid(48);
  RasterSet sq = centered_square(g);
  RasterSet shrunk = erode(sq, 2.5 * g.h());
  BirkhoffNumbers nums;
  AuditReport rep =
      audit_birkhoff(sq, shrunk, specstab::fem::CoefficientField::identity(), 2, &nums);
  CHECK(rep.pass);
  CHECK(rep.failures == 0);
  CHECK(nums.Bn < nums.p);
  CHECK(nums.An > 0.0);
  CHECK(nums.correction > 0.0);
  CHECK(nums.lam2[1] > nums.lam1[1]);  // erosion raises every eigenvalue
  // The certified lower bound must actually cover the raised eigenvalue.
  CHECK(nums.lam1[1] >= nums.lam2[1] - nums.correction - 1e-9);
  CHECK_THROWS_AS(audit_birkhoff(sq, shrunk, specstab::fem::CoefficientField::identity(), 0),
                  DomainError);
}

TEST_CASE("a drastic erosion voids the comparison hypothesis") {
  GridGeometry g = lab_grid(32);
  RasterSet sq = centered_square(g);
  RasterSet tiny = erode(sq, 0.3 + 0.5 * g.h());
  CHECK(tiny.count() > 0);  // a genuine but far-away domain
  CHECK_THROWS_AS(audit_birkhoff(sq, tiny, specstab::fem::CoefficientField::identity(), 1),
                  InapplicableError);
}

TEST_CASE("geometric property suites run clean on seeded draws") {
  GeometryAuditOptions opts;
  opts.grid_n = 64;
  for (GeometrySuite suite :
       {GeometrySuite::DilationStability, GeometrySuite::BallInCone,
        GeometrySuite::EscapeDirection, GeometrySuite::GapComparability}) {
    AuditReport rep = audit_geometry(suite, 4, 77, opts);
    INFO("suite ", geometry_suite_name(suite));
    CHECK(rep.pass);
    CHECK(rep.failures == 0);
    CHECK(rep.instances == 4);
    CHECK(rep.tolerance == doctest::Approx(2.0 * std::sqrt(2.0) / 64.0).epsilon(1e-12));
    CHECK(rep.worst_slack >= -rep.tolerance);
  }
}

TEST_CASE("scan rules agree on decisive fans with zero slack") {
  // Rule agreement draws r >= 3.5 h, so it needs the default fine audit grid;
  // coarser grids push the clearance past the rectangle sides.
  AuditReport a = audit_geometry(GeometrySuite::RuleAgreement, 6, 123);
  CHECK(a.pass);
  CHECK(a.failures == 0);
  CHECK(a.worst_slack == 0.0);
  AuditReport b = audit_geometry(GeometrySuite::RuleAgreement, 6, 123);
  CHECK(b.worst_slack == 0.0);
  CHECK(a.rejected == b.rejected);  // same seed, same draw sequence
}

TEST_CASE("geometry audits validate their options") {
  GeometryAuditOptions opts;
  CHECK_THROWS_AS(audit_geometry(GeometrySuite::BallInCone, 0, 1, opts), DomainError);
  opts.grid_n = 16;
  CHECK_THROWS_AS(audit_geometry(GeometrySuite::BallInCone, 1, 1, opts), DomainError);
  opts.grid_n = 64;
  opts.directions = 4;
  CHECK_THROWS_AS(audit_geometry(GeometrySuite::BallInCone, 1, 1, opts), DomainError);
}

TEST_CASE("suite names are distinct labels") {
  std::set<std::string> names;
  for (GeometrySuite suite :
       {GeometrySuite::DilationStability, GeometrySuite::BallInCone,
        GeometrySuite::EscapeDirection, GeometrySuite::GapComparability,
        GeometrySuite::RuleAgreement})
    names.insert(geometry_suite_name(suite));
  CHECK(names.size() == 5);
}

TEST_SUITE_END();
