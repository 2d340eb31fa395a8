#include <array>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "specstab/fem/dirichlet.hpp"
#include "specstab/lab/sweep.hpp"

using namespace specstab::geom;
using namespace specstab::lab;
using specstab::DomainError;
using specstab::EmptyDomain;
using specstab::GapError;
using specstab::MarginError;
using specstab::ModulusError;
using specstab::ResolutionError;

namespace {

// Square of side one centered in the 1.5-box; every 0.25 offset is a whole
// number of cells when n is a multiple of 6.
FamilySpec square_family(FamilyKind kind, std::vector<double> schedule) {
  FamilySpec spec;
  spec.kind = kind;
  spec.base = ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25});
  spec.schedule = std::move(schedule);
  return spec;
}

GridGeometry lab_grid(int n) { return GridGeometry({0.0, 0.0}, 1.5, n); }

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("eroded members are exactly the shrunken lattice squares") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Erode, {4 * h, 2 * h, 1 * h}), g);
  CHECK(fam.base().mask() == rasterize(ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25}), g).mask());
  for (int k : {1, 2, 4}) {
    RasterSet want = rasterize(
        ShapeSpec::rectangle({0.25 + k * h, 0.25 + k * h}, {1.25 - k * h, 1.25 - k * h}), g);
    CHECK(fam.member(k * h).mask() == want.mask());
  }
}

TEST_CASE("dilated members are the grown squares with round corners") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Dilate, {2 * h}), g);
  // One layer: every Chebyshev neighbor is within sqrt(2) h < 1.5 h.
  RasterSet want1 = rasterize(
      ShapeSpec::rectangle({0.25 - h, 0.25 - h}, {1.25 + h, 1.25 + h}), g);
  CHECK(fam.member(1 * h).mask() == want1.mask());
  // Two layers: the Euclidean ball of radius 2.5 h misses the four corner
  // cells at offset (2,2), distance sqrt(8) h.
  RasterSet want2 = rasterize(
      ShapeSpec::rectangle({0.25 - 2 * h, 0.25 - 2 * h}, {1.25 + 2 * h, 1.25 + 2 * h}), g);
  for (auto [i, j] : {std::pair{6, 6}, {6, 41}, {41, 6}, {41, 41}}) want2.set(i, j, false);
  CHECK(fam.member(2 * h).mask() == want2.mask());
}

TEST_CASE("translated members shift whole cells and respect the frame") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Translate, {2 * h}), g);
  RasterSet want = rasterize(
      ShapeSpec::rectangle({0.25 + 2 * h, 0.25}, {1.25 + 2 * h, 1.25}), g);
  CHECK(fam.member(2 * h).mask() == want.mask());
  CHECK(fam.member(4 * h).count() == fam.base().count());
  CHECK_THROWS_AS(fam.member(8 * h), MarginError);
}

TEST_CASE("bump members grow a tent of the declared height profile") {
  GridGeometry g({0.0, 0.0}, 1.0, 32);
  FamilySpec spec;
  spec.kind = FamilyKind::BoundaryBump;
  spec.schedule = {0.1, 0.05};
  spec.profile_modulus = Modulus::lipschitz(1.0);
  spec.bump_base_level = 0.5;
  spec.bump_rho = 1.0;
  PerturbationFamily fam(spec, g);

  RasterSet flat = fam.member(0.0);
  CHECK(flat.count() == 450);  // rows 1..15 of columns 1..30: centers below y = 1/2
  RasterSet bumped = fam.member(0.1);
  for (size_t q = 0; q < flat.mask().size(); ++q)
    if (flat.mask()[q]) CHECK(bumped.mask()[q] == 1);
  // Tent peak eps * omega(1/2) = 0.05 over the base line reaches row 17.
  int top_row = 0;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (bumped.at(i, j)) top_row = std::max(top_row, j);
  CHECK(top_row == 17);
  CHECK_THROWS_AS(fam.member(20.0), MarginError);  // tent would pierce the frame
}

TEST_CASE("family construction validates schedule, base, and bump knobs") {
  GridGeometry g = lab_grid(48);
  CHECK_THROWS_AS(PerturbationFamily(square_family(FamilyKind::Erode, {}), g), DomainError);
  CHECK_THROWS_AS(PerturbationFamily(square_family(FamilyKind::Erode, {0.1, 0.1}), g),
                  DomainError);
  CHECK_THROWS_AS(PerturbationFamily(square_family(FamilyKind::Erode, {0.1, -0.2}), g),
                  DomainError);
  FamilySpec off_box = square_family(FamilyKind::Erode, {0.1});
  off_box.base = ShapeSpec::rectangle({2.0, 2.0}, {3.0, 3.0});
  CHECK_THROWS_AS(PerturbationFamily(off_box, g), EmptyDomain);
  FamilySpec hugging = square_family(FamilyKind::Erode, {0.1});
  hugging.base = ShapeSpec::rectangle({-0.1, -0.1}, {1.6, 0.7});
  CHECK_THROWS_AS(PerturbationFamily(hugging, g), MarginError);
  FamilySpec bad_bump = square_family(FamilyKind::BoundaryBump, {0.1});
  bad_bump.bump_rho = 1.5;
  CHECK_THROWS_AS(PerturbationFamily(bad_bump, GridGeometry({0, 0}, 1.0, 32)), DomainError);
  CHECK_THROWS_AS(PerturbationFamily(square_family(FamilyKind::Erode, {0.1}), g).member(-0.5),
                  DomainError);
}

TEST_CASE("boundary graphs reject increments beyond their declared class") {
  GridGeometry g({0.0, 0.0}, 1.0, 32);
  std::vector<double> jump(17, 0.3);
  for (size_t i = 8; i < jump.size(); ++i) jump[i] = 0.7;
  CHECK_THROWS_AS(from_boundary_graph(jump, GraphSide::Below, Modulus::lipschitz(1.0), 0.1, g),
                  ModulusError);
  std::vector<double> tent = {0.3, 0.5, 0.3};
  CHECK(graph_value(tent, 0.25) == doctest::Approx(0.4).epsilon(1e-15));
  RasterSet below = from_boundary_graph(tent, GraphSide::Below, Modulus::lipschitz(1.0), 0.4, g);
  RasterSet above = from_boundary_graph(tent, GraphSide::Above, Modulus::lipschitz(1.0), 0.4, g);
  CHECK(below.set_intersection(above).count() == 0);
}

TEST_CASE("eigenvalue sweep records carry exact lattice distances") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Erode, {4 * h, 2 * h}), g);
  SweepResult res = eigen_stability_sweep(fam, specstab::fem::CoefficientField::identity());
  REQUIRE(res.records.size() == 2);
  for (size_t q = 0; q < 2; ++q) {
    const SweepRecord& rec = res.records[q];
    double k = rec.eps / h;
    CHECK(rec.d_hp == doctest::Approx(std::sqrt(2.0) * k * h).epsilon(1e-12));
    CHECK(rec.d_open == doctest::Approx(k * h).epsilon(1e-12));
    CHECK(rec.eps_meas == rec.d_hp);
    CHECK(rec.bound == doctest::Approx(2.0 * rec.eps_meas).epsilon(1e-12));
    REQUIRE(rec.lambda_base.size() == 1);
    REQUIRE(rec.lambda_pert.size() == 1);
    CHECK(rec.lambda_pert[0] > rec.lambda_base[0]);  // smaller domain, larger eigenvalue
    CHECK(rec.value == rec.dlambda[0]);
    CHECK(rec.value > 0.0);
    CHECK(rec.ratio == doctest::Approx(rec.value / rec.bound).epsilon(1e-14));
    CHECK_FALSE(rec.flagged);
  }
  CHECK(res.records[0].value > res.records[1].value);  // deeper erosion moves farther
  CHECK(res.refined.empty());
  CHECK(res.fit.points == 0);  // two records are below the fit threshold
  CHECK(res.flagged == 0);
}

TEST_CASE("sub-cell erosion is caught by the refinement guard") {
  // n = 36 keeps the outer boundary ring clear of the 3 psi(r) ball-fit guard.
  GridGeometry g = lab_grid(36);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Erode, {0.4 * h}), g);
  CHECK(fam.member(0.4 * h).mask() == fam.base().mask());  // no coarse-grid response
  SweepOptions opts;
  opts.resolution_check = true;
  CHECK_THROWS_AS(eigen_stability_sweep(fam, specstab::fem::CoefficientField::identity(), opts),
                  ResolutionError);
}

TEST_CASE("a base outside its declared boundary class is refused") {
  // The corner violation needs psi(r) to span a couple of cells, so use the
  // unit box at n = 64 where the zero-modulus half-disk wraps the corners.
  GridGeometry g({0.0, 0.0}, 1.0, 64);
  FamilySpec spec;
  spec.kind = FamilyKind::Erode;
  spec.base = ShapeSpec::rectangle({0.25, 0.25}, {0.75, 0.75});
  spec.schedule = {2.0 * g.h()};
  spec.omega = Modulus::zero(0.0);  // half-disk cones cannot wrap the corners
  PerturbationFamily fam(spec, g);
  CHECK_THROWS_AS(eigen_stability_sweep(fam, specstab::fem::CoefficientField::identity()),
                  DomainError);
  SweepOptions relaxed;
  relaxed.validate_cusp = false;
  CHECK_NOTHROW(eigen_stability_sweep(fam, specstab::fem::CoefficientField::identity(), relaxed));
}

TEST_CASE("resolvent defects scale quadratically in the load") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Erode, {4 * h, 2 * h}), g);
  auto coeff = specstab::fem::CoefficientField::identity();
  SweepResult one = resolvent_sweep(fam, coeff, [](Point) { return 1.0; });
  SweepResult two = resolvent_sweep(fam, coeff, [](Point) { return 2.0; });
  REQUIRE(one.records.size() == 2);
  for (size_t q = 0; q < 2; ++q) {
    const SweepRecord& a = one.records[q];
    const SweepRecord& b = two.records[q];
    double k = a.eps / h;
    CHECK(a.e_sym_bd == doctest::Approx((k - 1.0) * h).epsilon(1e-12));
    CHECK(a.eps_meas == a.e_sym_bd);
    CHECK(a.value > 0.0);
    CHECK(b.value == doctest::Approx(4.0 * a.value).epsilon(1e-8));
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-8));
    CHECK(a.bound_dhs > 0.0);
    CHECK(a.ratio_dhs == doctest::Approx(a.value / a.bound_dhs).epsilon(1e-12));
  }

  // The defect is the energy norm square of the solution difference.
  specstab::fem::AmbientSystem amb(g, coeff);
  Eigen::VectorXd f = Eigen::VectorXd::Ones(amb.size());
  specstab::fem::DirichletSystem d0(amb, fam.base());
  specstab::fem::DirichletSystem d2(amb, fam.member(2 * h));
  Eigen::VectorXd u0 = specstab::fem::solve_dirichlet(d0, f).ambient;
  Eigen::VectorXd u2 = specstab::fem::solve_dirichlet(d2, f).ambient;
  double defect = amb.norm_V(u0 - u2);
  CHECK(one.records[1].value == doctest::Approx(defect * defect).epsilon(1e-10));
}

TEST_CASE("angle sweep tracks the first eigenspace of the shrinking square") {
  GridGeometry g = lab_grid(48);
  double h = g.h();
  PerturbationFamily fam(square_family(FamilyKind::Erode, {4 * h, 2 * h}), g);
  SweepResult res = angle_sweep(fam, specstab::fem::CoefficientField::identity());
  REQUIRE(res.records.size() == 2);
  for (const SweepRecord& rec : res.records) {
    CHECK(rec.value > 0.0);
    CHECK(rec.value <= 1.0);
    CHECK(rec.bound == doctest::Approx(2.0 * rec.e_sym_bd).epsilon(1e-12));
  }
  CHECK(res.records[0].value > res.records[1].value);  // angle shrinks with the erosion

  SweepOptions wide;
  wide.isolation_radius = 10.0;  // the doubled disk swallows the next cluster
  CHECK_THROWS_AS(angle_sweep(fam, specstab::fem::CoefficientField::identity(), wide), GapError);
}

TEST_CASE("log-log fit recovers exact power laws and rejects bad input") {
  std::vector<std::array<double, 2>> pts;
  for (double x : {0.5, 1.0, 2.0, 4.0}) pts.push_back({x, 3.0 * std::pow(x, 1.7)});
  FitResult fit = fit_slope(pts);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.rms <= 1e-12);
  CHECK(fit.points == 4);

  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 2.0}}), DomainError);
  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 2.0}, {3.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}), DomainError);
}

TEST_SUITE_END();
