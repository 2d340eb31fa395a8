#include "specstab/geom/cusp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "specstab/geom/distance.hpp"

namespace specstab::geom {

CuspCone make_cone(Modulus m, double r, Vec2 xi) {
  if (!(r > 0.0) || r > m.r_max()) throw DomainError("cone aperture r must lie in (0, r_max]");
  double norm = xi.norm();
  if (!(norm > 0.0)) throw DomainError("cone direction must be nonzero");
  CuspCone c{std::move(m), r, Vec2{xi.x / norm, xi.y / norm}};
  return c;
}

bool cone_contains(const CuspCone& cone, Point z) {
  // Rotate so that xi becomes the vertical axis: z_d = z.xi, z_t = z.xi_perp.
  const double zd = z.x * cone.xi.x + z.y * cone.xi.y;
  const double zt = z.x * cone.xi.y - z.y * cone.xi.x;
  const double wr = cone.modulus(cone.r);
  const double psi_r = cone.modulus.psi(cone.r);
  const double abs2 = z.x * z.x + z.y * z.y;
  if (zd >= wr) return abs2 < psi_r * psi_r;  // F region
  // S region
  if (std::abs(zt) >= cone.r) return false;
  return cone.modulus(std::abs(zt)) < zd;  // zd < wr already established
}

std::vector<std::pair<int, int>> cone_lattice_offsets(const CuspCone& cone, double h) {
  const double psi_r = cone.modulus.psi(cone.r);
  const int R = static_cast<int>(std::ceil(psi_r / h)) + 1;
  std::vector<std::pair<int, int>> out;
  for (int oj = -R; oj <= R; ++oj)
    for (int oi = -R; oi <= R; ++oi)
      if (cone_contains(cone, Point{oi * h, oj * h})) out.emplace_back(oi, oj);
  return out;
}

namespace {

struct Workspace {
  const RasterSet* X = nullptr;
  double h = 0.0;
  double psi_r = 0.0;
  std::vector<double> d2_in;   // squared cell distances to X
  std::vector<double> d2_out;  // squared cell distances to complement
  std::vector<Vec2> dirs;
  std::vector<std::vector<std::pair<int, int>>> offsets;  // per direction
};

Workspace make_workspace(const RasterSet& X, const Modulus& m, double r,
                         const CuspOptions& opts) {
  if (opts.directions < 1) throw DomainError("direction count must be >= 1");
  Workspace w;
  w.X = &X;
  w.h = X.grid().h();
  w.psi_r = m.psi(r);
  w.d2_in = squared_cell_distances(X);
  w.d2_out = squared_cell_distances(X.complement());
  w.dirs.reserve(opts.directions);
  w.offsets.reserve(opts.directions);
  for (int k = 0; k < opts.directions; ++k) {
    double a = 2.0 * M_PI * k / opts.directions;
    Vec2 xi{std::cos(a), std::sin(a)};
    w.dirs.push_back(xi);
    w.offsets.push_back(cone_lattice_offsets(make_cone(m, r, xi), w.h));
  }
  return w;
}

void require_ball_fits(const GridGeometry& g, Point x, double rho3) {
  if (x.x - rho3 < g.origin.x - 1e-12 || x.x + rho3 > g.origin.x + g.side + 1e-12 ||
      x.y - rho3 < g.origin.y - 1e-12 || x.y + rho3 > g.origin.y + g.side + 1e-12)
    throw DomainError("cusp check: r too large for box at tested point");
}

struct DirectionOutcome {
  bool pass = true;
  double worst_depth = 0.0;
  Point worst_inner{}, worst_outer{};
};

// Scans all sample pairs of the selected rule for one direction.
// stop_on_first: return on the first violation without depth bookkeeping.
DirectionOutcome scan_direction(const Workspace& w, Point x, int dir_index, CuspRule rule,
                                bool stop_on_first) {
  const RasterSet& X = *w.X;
  const GridGeometry& g = X.grid();
  const int n = g.n;
  const double h = w.h;
  const double r2_ball = 2.0 * w.psi_r;
  const double r3_ball = 3.0 * w.psi_r;
  // The scan pivot runs over complement samples in B2 (W1) or B3 (W2); the
  // cone offset reaches the paired in-domain sample.
  const double pivot_r = (rule == CuspRule::W1) ? r2_ball : r3_ball;
  const double mate_r = (rule == CuspRule::W1) ? r3_ball : r2_ball;
  DirectionOutcome out;
  const auto& offs = w.offsets[static_cast<size_t>(dir_index)];
  const int lo_i = std::max(0, g.cell_i(x.x - pivot_r) - 1);
  const int hi_i = std::min(n - 1, g.cell_i(x.x + pivot_r) + 1);
  const int lo_j = std::max(0, g.cell_j(x.y - pivot_r) - 1);
  const int hi_j = std::min(n - 1, g.cell_j(x.y + pivot_r) + 1);
  for (int wj = lo_j; wj <= hi_j; ++wj)
    for (int wi = lo_i; wi <= hi_i; ++wi) {
      if (X.at(wi, wj)) continue;
      Point cw = g.center(wi, wj);
      double dwx = cw.x - x.x, dwy = cw.y - x.y;
      if (dwx * dwx + dwy * dwy >= pivot_r * pivot_r) continue;
      for (auto [oi, oj] : offs) {
        int yi = wi + oi, yj = wj + oj;
        if (!g.in_range(yi, yj) || !X.at(yi, yj)) continue;
        Point cy = g.center(yi, yj);
        double dyx = cy.x - x.x, dyy = cy.y - x.y;
        if (dyx * dyx + dyy * dyy >= mate_r * mate_r) continue;
        // Violation: under W1 the complement sample w should belong to X;
        // under W2 the in-domain sample y should belong to the complement.
        out.pass = false;
        if (stop_on_first) return out;
        double depth;
        if (rule == CuspRule::W1)
          depth = std::sqrt(w.d2_in[static_cast<size_t>(wj) * n + wi]) * h;
        else
          depth = std::sqrt(w.d2_out[static_cast<size_t>(yj) * n + yi]) * h;
        if (depth > out.worst_depth) {
          out.worst_depth = depth;
          out.worst_inner = cy;
          out.worst_outer = cw;
        }
      }
    }
  return out;
}

std::vector<int> ordered_directions(const Workspace& w, Point x) {
  const RasterSet& X = *w.X;
  const GridGeometry& g = X.grid();
  const int n = g.n;
  const double r2_ball = 2.0 * w.psi_r;
  // Outward heuristic: directions closest to the local complement centroid
  // are tried first.
  double cx = 0.0, cy = 0.0;
  int cnt = 0;
  const int lo_i = std::max(0, g.cell_i(x.x - r2_ball) - 1);
  const int hi_i = std::min(n - 1, g.cell_i(x.x + r2_ball) + 1);
  const int lo_j = std::max(0, g.cell_j(x.y - r2_ball) - 1);
  const int hi_j = std::min(n - 1, g.cell_j(x.y + r2_ball) + 1);
  for (int j = lo_j; j <= hi_j; ++j)
    for (int i = lo_i; i <= hi_i; ++i) {
      if (X.at(i, j)) continue;
      Point c = g.center(i, j);
      double dx = c.x - x.x, dy = c.y - x.y;
      if (dx * dx + dy * dy >= r2_ball * r2_ball) continue;
      cx += dx;
      cy += dy;
      ++cnt;
    }
  std::vector<int> order(w.dirs.size());
  std::iota(order.begin(), order.end(), 0);
  if (cnt > 0) {
    Vec2 u{cx / cnt, cy / cnt};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      double da = w.dirs[static_cast<size_t>(a)].dot(u);
      double db = w.dirs[static_cast<size_t>(b)].dot(u);
      return da > db;
    });
  }
  return order;
}

CuspSampleRecord check_point(const Workspace& w, Point x, const CuspOptions& opts) {
  require_ball_fits(w.X->grid(), x, 3.0 * w.psi_r);
  CuspSampleRecord rec;
  rec.x = x;
  std::vector<int> order = ordered_directions(w, x);
  for (int d : order) {
    DirectionOutcome o = scan_direction(w, x, d, opts.rule, /*stop_on_first=*/true);
    if (o.pass) {
      rec.found = true;
      rec.xi = w.dirs[static_cast<size_t>(d)];
      rec.margin = 0.0;
      return rec;
    }
  }
  // No direction passes: report the least-bad direction with its worst pair.
  double best = kInfiniteDist;
  for (size_t d = 0; d < w.dirs.size(); ++d) {
    DirectionOutcome o = scan_direction(w, x, static_cast<int>(d), opts.rule, false);
    if (o.worst_depth < best) {
      best = o.worst_depth;
      rec.xi = w.dirs[d];
      rec.worst_inner = o.worst_inner;
      rec.worst_outer = o.worst_outer;
    }
  }
  rec.found = false;
  rec.margin = -best;
  return rec;
}

}  // namespace

CuspSampleRecord cusp_check_at(const RasterSet& X, Point x, const Modulus& m, double r,
                               const CuspOptions& opts) {
  X.require_nonempty("cusp_check_at");
  Workspace w = make_workspace(X, m, r, opts);
  return check_point(w, x, opts);
}

CuspReport cusp_check(const RasterSet& X, const Modulus& m, double r,
                      const CuspOptions& opts) {
  X.require_nonempty("cusp_check");
  Workspace w = make_workspace(X, m, r, opts);
  CuspReport report;
  report.r = r;
  report.directions = opts.directions;
  report.rule = opts.rule;
  report.modulus = m.describe();
  RasterSet bnd = X.boundary();
  const GridGeometry& g = X.grid();
  report.pass = true;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      if (!bnd.at(i, j)) continue;
      CuspSampleRecord rec = check_point(w, g.center(i, j), opts);
      if (!rec.found) report.pass = false;
      report.records.push_back(rec);
    }
  return report;
}

DirectionVerdict cusp_direction_verdict(const RasterSet& X, Point x, const CuspCone& cone,
                                        CuspRule rule) {
  X.require_nonempty("cusp_direction_verdict");
  Workspace w;
  w.X = &X;
  w.h = X.grid().h();
  w.psi_r = cone.modulus.psi(cone.r);
  w.d2_in = squared_cell_distances(X);
  w.d2_out = squared_cell_distances(X.complement());
  w.dirs = {cone.xi};
  w.offsets = {cone_lattice_offsets(cone, w.h)};
  require_ball_fits(X.grid(), x, 3.0 * w.psi_r);
  DirectionOutcome o = scan_direction(w, x, 0, rule, false);
  return DirectionVerdict{o.pass, o.worst_depth, o.worst_inner, o.worst_outer};
}

std::string CuspReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  j["r"] = r;
  j["directions"] = directions;
  j["rule"] = (rule == CuspRule::W1) ? "W1" : "W2";
  j["modulus"] = modulus;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json s;
    s["x"] = {rec.x.x, rec.x.y};
    s["found"] = rec.found;
    s["margin"] = rec.margin;
    if (rec.found) {
      s["xi"] = {rec.xi.x, rec.xi.y};
    } else {
      s["best_xi"] = {rec.xi.x, rec.xi.y};
      s["worst_inner"] = {rec.worst_inner.x, rec.worst_inner.y};
      s["worst_outer"] = {rec.worst_outer.x, rec.worst_outer.y};
    }
    samples.push_back(s);
  }
  j["samples"] = samples;
  return j.dump(2);
}

}  // namespace specstab::geom
