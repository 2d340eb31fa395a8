// Microbenchmarks for the hot paths: distance transforms, morphology, cusp
// scans, assembly, Dirichlet solves, and eigenpairs.  Grid size is the Arg.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "specstab/fem/assembly.hpp"
#include "specstab/fem/dirichlet.hpp"
#include "specstab/geom/cusp.hpp"
#include "specstab/geom/distance.hpp"
#include "specstab/geom/morphology.hpp"
#include "specstab/geom/shapes.hpp"
#include "specstab/spectral/eigensolve.hpp"

namespace {

using namespace specstab;

geom::GridGeometry grid_of(int n) { return geom::GridGeometry({0, 0}, 1.5, n); }

geom::RasterSet square_on(const geom::GridGeometry& g) {
  return geom::rasterize(geom::ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25}), g);
}

void BM_DistanceTransform(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  geom::RasterSet x = square_on(g);
  for (auto _ : state) benchmark::DoNotOptimize(geom::squared_cell_distances(x));
}
BENCHMARK(BM_DistanceTransform)->Arg(64)->Arg(192)->Arg(384)->Unit(benchmark::kMicrosecond);

void BM_HausdorffBundle(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  geom::RasterSet x = square_on(g);
  geom::RasterSet y = geom::erode(x, 3.5 * g.h());
  for (auto _ : state) benchmark::DoNotOptimize(geom::hausdorff_distances(x, y));
}
BENCHMARK(BM_HausdorffBundle)->Arg(64)->Arg(192)->Arg(384)->Unit(benchmark::kMicrosecond);

void BM_Erode(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  geom::RasterSet x = square_on(g);
  for (auto _ : state) benchmark::DoNotOptimize(geom::erode(x, 3.5 * g.h()));
}
BENCHMARK(BM_Erode)->Arg(64)->Arg(192)->Arg(384)->Unit(benchmark::kMicrosecond);

void BM_CuspCheckPoint(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  geom::RasterSet x = square_on(g);
  geom::Modulus m = geom::Modulus::lipschitz(1.0);
  geom::Point corner{0.25 + 0.5 * g.h(), 0.25 + 0.5 * g.h()};
  for (auto _ : state) benchmark::DoNotOptimize(geom::cusp_check_at(x, corner, m, 0.05));
}
BENCHMARK(BM_CuspCheckPoint)->Arg(96)->Arg(192)->Unit(benchmark::kMicrosecond);

void BM_CuspCheckBoundary(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  geom::RasterSet x = square_on(g);
  geom::Modulus m = geom::Modulus::lipschitz(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(geom::cusp_check(x, m, 0.05));
}
BENCHMARK(BM_CuspCheckBoundary)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_Assembly(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    fem::AmbientSystem amb(g, fem::CoefficientField::identity());
    benchmark::DoNotOptimize(amb.size());
  }
}
BENCHMARK(BM_Assembly)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_DirichletSolve(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  fem::AmbientSystem amb(g, fem::CoefficientField::identity());
  fem::DirichletSystem sys = fem::restrict_to(amb, square_on(g));
  Eigen::VectorXd f = Eigen::VectorXd::Ones(amb.size());
  for (auto _ : state) benchmark::DoNotOptimize(fem::solve_dirichlet(sys, f));
}
BENCHMARK(BM_DirichletSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Eigenpairs(benchmark::State& state) {
  geom::GridGeometry g = grid_of(static_cast<int>(state.range(0)));
  fem::AmbientSystem amb(g, fem::CoefficientField::identity());
  fem::DirichletSystem sys = fem::restrict_to(amb, square_on(g));
  for (auto _ : state) benchmark::DoNotOptimize(spectral::eigens(sys, 4));
}
BENCHMARK(BM_Eigenpairs)->Arg(48)->Arg(96)->Arg(192)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
