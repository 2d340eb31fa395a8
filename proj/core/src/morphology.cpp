#include "specstab/geom/morphology.hpp"

#include "specstab/geom/distance.hpp"

namespace specstab::geom {

namespace {
double threshold_cells2(const RasterSet& X, double eps) {
  if (eps < 0.0) throw DomainError("morphology radius must be >= 0");
  double t = eps / X.grid().h();
  return t * t;
}
}  // namespace

RasterSet dilate(const RasterSet& X, double eps) {
  const double t2 = threshold_cells2(X, eps);
  RasterSet out = X;
  if (!X.empty_set()) {
    std::vector<double> d2 = squared_cell_distances(X);
    const int n = X.grid().n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (d2[static_cast<size_t>(j) * n + i] < t2) out.set(i, j, true);
  }
  out.require_margin("dilate");
  return out;
}

RasterSet erode(const RasterSet& X, double eps) {
  const double t2 = threshold_cells2(X, eps);
  RasterSet out = X;
  RasterSet comp = X.complement();
  if (!comp.empty_set()) {
    std::vector<double> d2 = squared_cell_distances(comp);
    const int n = X.grid().n;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (X.at(i, j) && d2[static_cast<size_t>(j) * n + i] < t2) out.set(i, j, false);
  }
  return out;
}

}  // namespace specstab::geom
