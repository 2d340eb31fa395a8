#include "specstab/geom/distance.hpp"

#include <algorithm>
#include <cmath>

namespace specstab::geom {

namespace {

// One-dimensional squared-distance transform (lower envelope of parabolas),
// exact for integer site values; infinite sites contribute no parabola.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInfiniteDist) continue;
    double s = 0.0;
    while (k >= 0) {
      s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = (k == 0) ? -kInfiniteDist : s;
    z[k + 1] = kInfiniteDist;
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInfiniteDist);
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

}  // namespace

std::vector<double> squared_cell_distances(const RasterSet& X) {
  const int n = X.grid().n;
  std::vector<double> dist(static_cast<size_t>(n) * n, kInfiniteDist);
  if (X.empty_set()) return dist;
  // Pass 1: columns (distance along j for each i).
  std::vector<double> f(n), d(n), z(static_cast<size_t>(n) + 1);
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) f[j] = X.at(i, j) ? 0.0 : kInfiniteDist;
    edt_1d(f, d, v, z);
    for (int j = 0; j < n; ++j) dist[static_cast<size_t>(j) * n + i] = d[j];
  }
  // Pass 2: rows.
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) f[i] = dist[static_cast<size_t>(j) * n + i];
    edt_1d(f, d, v, z);
    for (int i = 0; i < n; ++i) dist[static_cast<size_t>(j) * n + i] = d[i];
  }
  return dist;
}

double point_set_distance(Point p, const RasterSet& X) {
  if (X.empty_set()) return kInfiniteDist;
  const GridGeometry& g = X.grid();
  const int n = g.n;
  // Expand a square search window until a member is found, then one extra
  // ring pass guarantees the true minimum.
  int ci = g.cell_i(p.x), cj = g.cell_j(p.y);
  double best2 = kInfiniteDist;
  for (int radius = 0; radius <= 2 * n; ++radius) {
    bool improved = false;
    int lo_i = ci - radius, hi_i = ci + radius;
    int lo_j = cj - radius, hi_j = cj + radius;
    for (int j = lo_j; j <= hi_j; ++j) {
      if (j < 0 || j >= n) continue;
      bool j_edge = (j == lo_j || j == hi_j);
      for (int i = lo_i; i <= hi_i; ++i) {
        if (i < 0 || i >= n) continue;
        if (!j_edge && i != lo_i && i != hi_i) continue;
        if (!X.at(i, j)) continue;
        Point c = g.center(i, j);
        double dx = c.x - p.x, dy = c.y - p.y;
        double d2 = dx * dx + dy * dy;
        if (d2 < best2) {
          best2 = d2;
          improved = true;
        }
      }
    }
    // Cells on ring radius+1 are at least radius*h away from p; once the
    // current best is below that, no farther ring can improve it.
    if (best2 < kInfiniteDist && !improved) {
      double ring_min = (radius)*g.h();
      if (ring_min * ring_min >= best2) break;
    }
  }
  return std::sqrt(best2);
}

namespace {

// sup over Q-samples of sqrt(dist2 to T), dist2 given per cell; 0 if Q empty,
// +inf if T empty and Q nonempty.
double sup_over(const RasterSet& Q, const std::vector<double>& dist2_to_T, double h) {
  double worst = -1.0;
  const int n = Q.grid().n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!Q.at(i, j)) continue;
      double d2 = dist2_to_T[static_cast<size_t>(j) * n + i];
      if (d2 > worst) worst = d2;
    }
  if (worst < 0.0) return 0.0;
  if (worst == kInfiniteDist) return kInfiniteDist;
  return std::sqrt(worst) * h;
}

}  // namespace

double gap(const RasterSet& X, const RasterSet& Y) {
  if (!X.same_grid(Y)) throw DomainError("gap: raster sets live on different grids");
  if (X.empty_set()) return 0.0;
  if (Y.empty_set()) return kInfiniteDist;
  return sup_over(X, squared_cell_distances(Y), X.grid().h());
}

double co_gap(const RasterSet& X, const RasterSet& Y) {
  return gap(Y.complement(), X.complement());
}

HausdorffDistances hausdorff_distances(const RasterSet& X, const RasterSet& Y) {
  if (!X.same_grid(Y)) throw DomainError("hausdorff: raster sets live on different grids");
  X.require_nonempty("hausdorff_distances");
  Y.require_nonempty("hausdorff_distances");
  HausdorffDistances out{};
  out.d_H = std::max(gap(X, Y), gap(Y, X));
  out.d_open = std::max(co_gap(X, Y), co_gap(Y, X));
  out.d_HP = std::max(out.d_H, out.d_open);
  RasterSet delta = X.symmetric_difference(Y);
  double e_dy = gap(delta, Y.boundary());
  double e_dx = gap(delta, X.boundary());
  out.d_HS = std::min(std::min(e_dy, e_dx), std::min(out.d_H, out.d_open));
  return out;
}

}  // namespace specstab::geom
