#include "specstab/lab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specstab/errors.hpp"
#include "specstab/fem/assembly.hpp"
#include "specstab/fem/dirichlet.hpp"
#include "specstab/geom/cusp.hpp"
#include "specstab/geom/distance.hpp"
#include "specstab/geom/morphology.hpp"
#include "specstab/geom/shapes.hpp"
#include "specstab/spectral/eigensolve.hpp"
#include "specstab/spectral/subspace.hpp"

namespace specstab::lab {

using geom::GridGeometry;
using geom::Modulus;
using geom::Point;
using geom::RasterSet;
using geom::Vec2;

void AuditReport::add(std::string what, double lhs, double rhs) {
  AuditCheck c;
  c.what = std::move(what);
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rhs - lhs;
  c.pass = c.slack >= -tolerance;
  if (!c.pass)
    ++failures;
  else if (c.slack < 0.0)
    ++banded;
  worst_slack = std::min(worst_slack, c.slack);
  details.push_back(std::move(c));
}

void AuditReport::finalize() {
  if (details.empty()) worst_slack = 0.0;
  pass = failures == 0;
}

namespace {

double urand(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int irand(std::mt19937_64& rng, int a, int b) {
  return std::uniform_int_distribution<int>(a, b)(rng);
}

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double quant(double v, double h) { return std::round(v / h) * h; }

// Smallest dilation radius of A whose raster covers B; 0 when B is inside A.
double covering_radius(const RasterSet& A, const RasterSet& B) {
  const std::vector<double> d2 = geom::squared_cell_distances(A);
  double worst = 0.0;
  const auto& mask = B.mask();
  for (std::size_t c = 0; c < mask.size(); ++c)
    if (mask[c]) worst = std::max(worst, d2[c]);
  if (worst == 0.0) return 0.0;
  return A.grid().h() * (std::sqrt(worst) + 0.5);
}

double spectral_max(const Eigen::MatrixXd& G) {
  const Eigen::MatrixXd S = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) throw NumericsError("audit: dense eigensolve failed");
  return std::max(0.0, es.eigenvalues().maxCoeff());
}

}  // namespace

AuditReport audit_savare(const RasterSet& o1, const RasterSet& o2,
                         const fem::CoefficientField& coeff, const Eigen::VectorXd& f) {
  if (!o1.same_grid(o2)) throw DomainError("audit_savare: domains on different grids");
  AuditReport rep;
  rep.name = "solution_comparison";
  rep.tolerance = 1e-9;

  fem::AmbientSystem amb(o1.grid(), coeff);
  if (f.size() != amb.size()) throw DomainError("audit_savare: load length mismatch");
  fem::DirichletSystem d1(amb, o1), d2(amb, o2);
  fem::DirichletSystem meet(amb, o1.set_intersection(o2));

  const double r12 = covering_radius(o1, o2);
  const double r21 = covering_radius(o2, o1);
  fem::DirichletSystem c1(amb, r12 > 0.0 ? geom::dilate(o1, r12) : o1);
  fem::DirichletSystem c2(amb, r21 > 0.0 ? geom::dilate(o2, r21) : o2);

  const Eigen::VectorXd u1 = fem::solve_dirichlet(d1, f).ambient;
  const Eigen::VectorXd u2 = fem::solve_dirichlet(d2, f).ambient;
  const Eigen::VectorXd w1 = fem::solve_dirichlet(c1, f).ambient;
  const Eigen::VectorXd w2 = fem::solve_dirichlet(c2, f).ambient;

  const double ratio = coeff.beta_on(o1.grid()) / coeff.alpha();
  const double defect = amb.norm_V(u1 - u2);

  rep.add("intersection route", defect,
          std::sqrt(ratio) *
              (spectral::subspace_distance(meet, u1) + spectral::subspace_distance(meet, u2)));
  rep.add("covering route", defect,
          std::sqrt(ratio) *
              (spectral::subspace_distance(d1, w1) + spectral::subspace_distance(d2, w1)));
  rep.add("split covering route", defect,
          ratio * (spectral::subspace_distance(d1, w1) + spectral::subspace_distance(d2, w2)));
  rep.instances = 1;
  rep.finalize();
  return rep;
}

AuditReport savare_suite(int count, std::uint64_t seed, int grid_n) {
  if (count < 1) throw DomainError("savare_suite: count must be positive");
  if (grid_n < 16) throw DomainError("savare_suite: grid too coarse");
  AuditReport rep;
  rep.name = "solution_comparison_suite";
  rep.seed = seed;
  rep.tolerance = 1e-9;

  const GridGeometry grid{{0.0, 0.0}, 1.5, grid_n};
  const double h = grid.h();
  const geom::ShapeSpec square = geom::ShapeSpec::rectangle({0.25, 0.25}, {1.25, 1.25});
  const RasterSet base = geom::rasterize(square, grid);
  const fem::CoefficientField fields[2] = {fem::CoefficientField::identity(),
                                           fem::CoefficientField::diagonal(1.0, 4.0)};
  std::mt19937_64 rng(seed);

  for (int i = 0; i < count; ++i) {
    const fem::CoefficientField& coeff = fields[i % 2];
    std::ostringstream kind;
    RasterSet other = base;
    switch (i % 4) {
      case 0:
        kind << "equal";
        break;
      case 1: {
        const int cells = irand(rng, 1, 3);
        const Vec2 axes[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
        const Vec2 ax = axes[irand(rng, 0, 3)];
        other = geom::rasterize(
            geom::ShapeSpec::translate(square, {ax.x * cells * h, ax.y * cells * h}), grid);
        kind << "translate " << cells;
        break;
      }
      case 2: {
        const int layers = irand(rng, 1, 2);
        other = geom::erode(base, (layers + 0.5) * h);
        kind << "erode " << layers;
        break;
      }
      default: {
        const int layers = irand(rng, 1, 2);
        other = geom::dilate(base, (layers + 0.5) * h);
        kind << "dilate " << layers;
        break;
      }
    }
    const int m = (grid_n - 1) * (grid_n - 1);
    Eigen::VectorXd f(m);
    if (irand(rng, 0, 1) == 0) {
      f.setOnes();
      kind << " f=1";
    } else {
      for (int k = 0; k < m; ++k) f[k] = urand(rng, -1.0, 1.0);
      kind << " f=rand";
    }
    const AuditReport one = audit_savare(base, other, coeff, f);
    for (const AuditCheck& c : one.details) {
      std::ostringstream what;
      what << "i=" << i << " " << kind.str() << " " << coeff.label() << ": " << c.what;
      rep.add(what.str(), c.lhs, c.rhs);
    }
    ++rep.instances;
  }
  rep.finalize();
  return rep;
}

AuditReport audit_birkhoff(const RasterSet& o1, const RasterSet& o2,
                           const fem::CoefficientField& coeff, int n, BirkhoffNumbers* numbers) {
  if (!o1.same_grid(o2)) throw DomainError("audit_birkhoff: domains on different grids");
  if (n < 1) throw DomainError("audit_birkhoff: n must be positive");
  AuditReport rep;
  rep.name = "eigenvalue_comparison";

  fem::AmbientSystem amb(o1.grid(), coeff);
  fem::DirichletSystem d1(amb, o1), d2(amb, o2);
  const spectral::EigenResult e1 = spectral::eigens(d1, n);
  const spectral::EigenResult e2 = spectral::eigens(d2, n);
  const double p = fem::friedrichs_constant(amb.metric_companion());

  // Defect columns of the energy projection onto the second space over an
  // L2-orthonormal eigenbasis of the first.
  Eigen::MatrixXd D(amb.size(), n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd uj = d1.extend(e1.vectors.col(j));
    D.col(j) = spectral::project_energy(d2, uj) - uj;
  }
  const Eigen::MatrixXd GK = D.transpose() * (amb.K() * D);
  const Eigen::MatrixXd GM = D.transpose() * (amb.M() * D);
  const double An = spectral_max(GK) / p;
  const double Bn = spectral_max(GM);
  if (!(Bn < p))
    throw InapplicableError("audit_birkhoff: mass defect reaches the box constant (B_n >= p)");
  const double denom = (std::sqrt(p) - std::sqrt(Bn)) * (std::sqrt(p) - std::sqrt(Bn)) * p;
  const double correction = An / denom;

  const double lam1 = e1.values[n - 1];
  const double lam2 = e2.values[n - 1];
  rep.tolerance = 1e-9 * (1.0 + std::abs(lam1) + correction);
  rep.add("mass defect below box constant", Bn, p);
  rep.add("eigenvalue lower bound", lam2 - correction, lam1);
  rep.instances = 1;
  rep.finalize();

  if (numbers) {
    numbers->An = An;
    numbers->Bn = Bn;
    numbers->p = p;
    numbers->correction = correction;
    numbers->lam1.assign(e1.values.data(), e1.values.data() + n);
    numbers->lam2.assign(e2.values.data(), e2.values.data() + n);
  }
  return rep;
}

namespace {

struct GeomCtx {
  GridGeometry grid{{0.0, 0.0}, 1.0, 128};
  int directions = 64;
  std::mt19937_64 rng;
  std::map<std::string, bool> verified;  // whole-boundary cusp verdict per base key
};

struct BaseDraw {
  Point lo, hi;
  RasterSet raster;
  Modulus modulus;
  double r = 0.0;
  std::string desc;
};

// Moduli with omega(s) >= s on (0, cap]: along such cones axis-aligned
// rectangle boundaries verify exactly, pivots on one side stay on that side.
Modulus draw_steep_modulus(std::mt19937_64& rng, bool with_offset, std::ostringstream& desc,
                           double* exact_cap) {
  const double off = with_offset ? 0.01 : 0.0;
  if (irand(rng, 0, 2) <= 1) {
    const double L = urand(rng, 1.0, 2.0);
    desc << "lip L=" << L;
    *exact_cap = std::numeric_limits<double>::infinity();
    return Modulus::lipschitz(L, off);
  }
  const double alpha = irand(rng, 0, 1) ? 0.5 : 0.65;
  desc << "hoelder a=" << alpha;
  *exact_cap = std::pow(0.3, 1.0 / (1.0 - alpha));
  return Modulus::hoelder(0.3, alpha, off);
}

// Cell-aligned rectangle inset far enough for the verification balls, with a
// steep modulus and a scale r in [r_min_cells * h, psi^{-1}(psi_cap)].
BaseDraw draw_rect_base(GeomCtx& g, double psi_cap, double r_min_cells, bool allow_offset) {
  const double h = g.grid.h();
  std::ostringstream desc;
  const bool offset_draw = allow_offset && irand(g.rng, 0, 9) == 0;
  double exact_cap = 0.0;
  Modulus m = draw_steep_modulus(g.rng, offset_draw, desc, &exact_cap);
  const double r_lo = r_min_cells * h;
  const double r_hi =
      std::max(r_lo, std::min({0.045, 0.999 * exact_cap, 0.999 * m.psi_inv(psi_cap)}));
  const double r = urand(g.rng, r_lo, r_hi);
  const Point lo{quant(urand(g.rng, 0.25, 0.27), h), quant(urand(g.rng, 0.25, 0.27), h)};
  const Point hi{quant(urand(g.rng, 0.73, 0.75), h), quant(urand(g.rng, 0.73, 0.75), h)};
  return BaseDraw{lo, hi, geom::rasterize(geom::ShapeSpec::rectangle(lo, hi), g.grid),
                  std::move(m), r, desc.str()};
}

// Boundary-cell center on one rectangle side, clear of the corners.
bool draw_edge_point(GeomCtx& g, const BaseDraw& b, double clear, Point* x, Vec2* outward,
                     std::string* side_name) {
  const double h = g.grid.h();
  const int side = irand(g.rng, 0, 3);
  const Vec2 normals[4] = {{0.0, -1.0}, {0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}};
  const char* names[4] = {"bottom", "top", "left", "right"};
  const RasterSet ib = b.raster.inner_boundary();
  const auto& mask = ib.mask();
  std::vector<Point> cands;
  for (int j = 0; j < g.grid.n; ++j)
    for (int i = 0; i < g.grid.n; ++i) {
      if (!mask[static_cast<std::size_t>(g.grid.index(i, j))]) continue;
      const Point c = g.grid.center(i, j);
      bool on_side = false;
      switch (side) {
        case 0: on_side = c.y < b.lo.y + 1.5 * h; break;
        case 1: on_side = c.y > b.hi.y - 1.5 * h; break;
        case 2: on_side = c.x < b.lo.x + 1.5 * h; break;
        default: on_side = c.x > b.hi.x - 1.5 * h; break;
      }
      if (!on_side) continue;
      const double along = (side < 2) ? c.x : c.y;
      const double alo = (side < 2) ? b.lo.x : b.lo.y;
      const double ahi = (side < 2) ? b.hi.x : b.hi.y;
      if (along < alo + clear || along > ahi - clear) continue;
      cands.push_back(c);
    }
  if (cands.empty()) return false;
  *x = cands[static_cast<std::size_t>(irand(g.rng, 0, static_cast<int>(cands.size()) - 1))];
  *outward = normals[side];
  if (side_name) *side_name = names[side];
  return true;
}

bool run_dilation_stability(GeomCtx& g, AuditReport& rep) {
  const double h = g.grid.h();
  const BaseDraw b = draw_rect_base(g, 0.062, 2.5, true);
  if (b.modulus.offset() > 0.0) {
    ++rep.rejected;
    return false;
  }
  const double psi = b.modulus.psi(b.r);
  Point x;
  Vec2 nout;
  std::string side;
  if (!draw_edge_point(g, b, 3.0 * psi + 2.0 * h, &x, &nout, &side)) {
    ++rep.rejected;
    return false;
  }
  geom::CuspOptions co;
  co.directions = g.directions;
  if (!geom::cusp_check_at(b.raster, x, b.modulus, b.r, co).found) {
    ++rep.rejected;
    return false;
  }
  const double eps = urand(g.rng, 0.2, 1.0) * psi;
  const RasterSet dil = geom::dilate(b.raster, eps);
  const double r2 = b.modulus.psi_inv(psi / 2.0);
  const geom::CuspSampleRecord rec = geom::cusp_check_at(dil, x, b.modulus, r2, co);
  const double depth = rec.found ? 0.0 : -rec.margin;
  std::ostringstream what;
  what << "i=" << rep.instances << " " << b.desc << " r=" << b.r << " eps=" << eps << " " << side
       << ": dilated cusp depth";
  rep.add(what.str(), depth, 0.0);
  return true;
}

bool run_ball_in_cone(GeomCtx& g, AuditReport& rep) {
  std::ostringstream desc;
  const bool offset_draw = irand(g.rng, 0, 9) == 0;
  const double off = offset_draw ? 0.01 : 0.0;
  Modulus m = Modulus::zero(off);
  switch (irand(g.rng, 0, 2)) {
    case 0:
      desc << "zero";
      break;
    case 1: {
      const double L = urand(g.rng, 0.3, 2.0);
      m = Modulus::lipschitz(L, off);
      desc << "lip L=" << L;
      break;
    }
    default: {
      const double C = urand(g.rng, 0.2, 1.0);
      const double alpha = urand(g.rng, 0.5, 0.8);
      m = Modulus::hoelder(C, alpha, off);
      desc << "hoelder C=" << C << " a=" << alpha;
      break;
    }
  }
  if (m.offset() > 0.0) {
    ++rep.rejected;
    return false;
  }
  const double r = urand(g.rng, 0.02, 0.12);
  const double ang = urand(g.rng, 0.0, 2.0 * std::acos(-1.0));
  const Vec2 xi{std::cos(ang), std::sin(ang)};
  const double psi = m.psi(r);
  double eps = m.phi_inv(psi / 2.0);
  if (irand(g.rng, 0, 9) < 7) eps *= urand(g.rng, 0.05, 1.0);
  while (m.phi(eps) > psi / 2.0) eps *= 1.0 - 1e-9;  // keep the shifted center admissible

  const double phi_eps = m.phi(eps);
  double worst = std::numeric_limits<double>::infinity();
  const int nlat = 33;
  for (int a = 0; a < nlat; ++a)
    for (int bq = 0; bq < nlat; ++bq) {
      const double px = (-1.0 + 2.0 * a / (nlat - 1.0)) * eps;
      const double py = (-1.0 + 2.0 * bq / (nlat - 1.0)) * eps;
      if (px * px + py * py >= eps * eps) continue;  // open-ball samples only
      const Vec2 z{xi.x * phi_eps + px, xi.y * phi_eps + py};
      const double zd = z.x * xi.x + z.y * xi.y;
      const double zt = std::abs(-z.x * xi.y + z.y * xi.x);
      const double zn = std::sqrt(z.x * z.x + z.y * z.y);
      const double mf = std::min(zd - m(r), psi - zn);
      const double ms = std::min({r - zt, m(r) - zd, zd - m(zt)});
      worst = std::min(worst, std::max(mf, ms));
    }
  std::ostringstream what;
  what << "i=" << rep.instances << " " << desc.str() << " r=" << r << " eps=" << eps
       << ": ball-in-cone margin";
  rep.add(what.str(), -worst, 0.0);
  return true;
}

bool run_escape_direction(GeomCtx& g, AuditReport& rep) {
  const double h = g.grid.h();
  const BaseDraw b = draw_rect_base(g, 0.062, 2.5, true);
  if (b.modulus.offset() > 0.0) {
    ++rep.rejected;
    return false;
  }
  const double rho = b.modulus.psi(b.r);
  Point y;
  Vec2 nout;
  std::string side;
  if (!draw_edge_point(g, b, 3.0 * rho + 2.0 * h, &y, &nout, &side)) {
    ++rep.rejected;
    return false;
  }
  geom::CuspOptions co;
  co.directions = g.directions;
  const geom::CuspSampleRecord rec = geom::cusp_check_at(b.raster, y, b.modulus, b.r, co);
  if (!rec.found) {
    ++rep.rejected;
    return false;
  }
  const double bound = b.modulus.phi_inv(rho / 4.0);
  double eta = (irand(g.rng, 0, 3) == 0) ? 0.0 : -urand(g.rng, 0.0, 1.0) * bound;
  double eps = (irand(g.rng, 0, 3) == 0) ? 0.0 : urand(g.rng, 0.0, 1.0) * bound;
  while (b.modulus.phi(eps) > rho / 4.0) eps *= 1.0 - 1e-9;
  while (b.modulus.phi(-eta) > rho / 4.0) eta *= 1.0 - 1e-9;

  const RasterSet eroded = eta < 0.0 ? geom::erode(b.raster, -eta) : b.raster;
  const RasterSet dil = eps > 0.0 ? geom::dilate(b.raster, eps) : b.raster;
  const RasterSet dil_comp = dil.complement();
  const double shift = b.modulus.phi(eps) + b.modulus.phi(-eta);
  const Vec2 xi = rec.xi;

  double worst = 0.0;  // deepest landing inside the dilated set
  const int i0 = g.grid.cell_i(y.x - 2.0 * rho) - 1, i1 = g.grid.cell_i(y.x + 2.0 * rho) + 1;
  const int j0 = g.grid.cell_j(y.y - 2.0 * rho) - 1, j1 = g.grid.cell_j(y.y + 2.0 * rho) + 1;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      if (!g.grid.in_range(i, j)) continue;
      const Point c = g.grid.center(i, j);
      if ((c - y).norm2() >= 4.0 * rho * rho) continue;
      if (eroded.at(i, j)) continue;
      const Point t{c.x + shift * xi.x, c.y + shift * xi.y};
      const int ti = g.grid.cell_i(t.x), tj = g.grid.cell_j(t.y);
      if (!g.grid.in_range(ti, tj)) continue;
      if (!dil.at(ti, tj)) continue;
      worst = std::max(worst, geom::point_set_distance(t, dil_comp));
    }
  std::ostringstream what;
  what << "i=" << rep.instances << " " << b.desc << " r=" << b.r << " eta=" << eta
       << " eps=" << eps << " " << side << ": escape landing depth";
  rep.add(what.str(), worst, 0.0);
  return true;
}

bool run_gap_comparability(GeomCtx& g, AuditReport& rep) {
  const double h = g.grid.h();
  struct Combo {
    double lox, loy, hix, hiy, r;
    int mkind;  // 0 lipschitz(p1), 1 hoelder(0.3, p1)
    double p1;
  };
  static const Combo combos[4] = {
      {0.25, 0.25, 0.75, 0.75, 0.055, 0, 1.0},
      {0.27, 0.25, 0.73, 0.71, 0.050, 0, 1.0},
      {0.25, 0.27, 0.71, 0.75, 0.045, 0, 1.25},
      {0.26, 0.26, 0.74, 0.74, 0.045, 1, 0.5},
  };
  const int ci = irand(g.rng, 0, 3);
  const bool offset_draw = irand(g.rng, 0, 9) == 0;
  const Combo& cb = combos[ci];
  const double off = offset_draw ? 0.01 : 0.0;
  const Modulus m =
      cb.mkind == 0 ? Modulus::lipschitz(cb.p1, off) : Modulus::hoelder(0.3, cb.p1, off);
  if (m.offset() > 0.0) {
    ++rep.rejected;
    return false;
  }
  const Point lo{quant(cb.lox, h), quant(cb.loy, h)};
  const Point hi{quant(cb.hix, h), quant(cb.hiy, h)};
  const geom::ShapeSpec rect = geom::ShapeSpec::rectangle(lo, hi);
  const RasterSet base = geom::rasterize(rect, g.grid);

  std::ostringstream key;
  key << ci << "@" << g.grid.n << "x" << g.directions;
  auto it = g.verified.find(key.str());
  if (it == g.verified.end()) {
    geom::CuspOptions co;
    co.directions = g.directions;
    it = g.verified.emplace(key.str(), geom::cusp_check(base, m, cb.r, co).pass).first;
  }
  if (!it->second) {
    ++rep.rejected;
    return false;
  }

  const double bound = m.phi_inv(m.psi(cb.r) / 2.0);
  std::vector<int> menu{0, 2, 3};  // erode, translate, bump always available
  if (bound > 1.01 * std::sqrt(2.0) * h) menu.push_back(1);
  const int pick = menu[static_cast<std::size_t>(irand(g.rng, 0, static_cast<int>(menu.size()) - 1))];
  RasterSet other = base;
  std::ostringstream kind;
  switch (pick) {
    case 0: {
      const int layers = irand(g.rng, 1, 2);
      other = geom::erode(base, (layers + 0.5) * h);
      kind << "erode " << layers;
      break;
    }
    case 1: {
      const int layers = (bound > 1.01 * std::sqrt(5.0) * h) ? irand(g.rng, 1, 2) : 1;
      other = geom::dilate(base, (layers + 0.5) * h);
      kind << "dilate " << layers;
      break;
    }
    case 2: {
      const int cells = (bound > 2.02 * h) ? irand(g.rng, 1, 2) : 1;
      const Vec2 axes[4] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
      const Vec2 ax = axes[irand(g.rng, 0, 3)];
      other = geom::rasterize(
          geom::ShapeSpec::translate(rect, {ax.x * cells * h, ax.y * cells * h}), g.grid);
      kind << "translate " << cells;
      break;
    }
    default: {
      const double w = urand(g.rng, 0.12, 0.2);
      const double a_hi = std::max(0.61 * h, std::min(bound - 0.5 * h, 2.4 * h));
      const double a = urand(g.rng, 0.6 * h, a_hi);
      const double x0 = urand(g.rng, lo.x + 0.05, hi.x - w - 0.05);
      const std::vector<Point> poly{{lo.x, lo.y},          {hi.x, lo.y},
                                    {hi.x, hi.y},          {x0 + w, hi.y},
                                    {x0 + w / 2.0, hi.y + a}, {x0, hi.y},
                                    {lo.x, hi.y}};
      other = geom::rasterize(geom::ShapeSpec::polygon(poly), g.grid);
      kind << "bump a=" << a;
      break;
    }
  }
  const double gapv = geom::gap(other, base);
  if (gapv > bound) {  // outside the comparability regime for this scale
    ++rep.rejected;
    return false;
  }
  const double cog = geom::co_gap(other, base);
  std::ostringstream what;
  what << "i=" << rep.instances << " combo " << ci << " " << kind.str()
       << ": co_gap vs phi(gap)";
  rep.add(what.str(), cog, m.phi(gapv));
  return true;
}

bool run_rule_agreement(GeomCtx& g, AuditReport& rep) {
  const double h = g.grid.h();
  const BaseDraw b = draw_rect_base(g, 0.062, 3.5, false);
  const double psi = b.modulus.psi(b.r);
  Point x;
  Vec2 nout;
  std::string side;
  if (!draw_edge_point(g, b, 3.0 * psi + 2.0 * h, &x, &nout, &side)) {
    ++rep.rejected;
    return false;
  }
  // Decisive fans: near the outward normal (or its exact diagonals) both rules
  // hold; near the inward normal both rules meet a violating pair near x.
  const double quarter = std::acos(-1.0) / 4.0;
  const int mode = irand(g.rng, 0, 3);
  const bool toward = mode >= 2;
  const double angle = (mode == 0 || mode == 3) ? (irand(g.rng, 0, 1) ? quarter : -quarter)
                                                : urand(g.rng, -0.69, 0.69);
  const Vec2 dir = toward ? Vec2{-nout.x, -nout.y} : nout;
  const geom::CuspCone cone = geom::make_cone(b.modulus, b.r, rotate(dir, angle));
  const geom::DirectionVerdict v1 = geom::cusp_direction_verdict(b.raster, x, cone, geom::CuspRule::W1);
  const geom::DirectionVerdict v2 = geom::cusp_direction_verdict(b.raster, x, cone, geom::CuspRule::W2);
  const double mismatch = (v1.pass == v2.pass) ? 0.0 : std::max(v1.depth, v2.depth);
  std::ostringstream what;
  what << "i=" << rep.instances << " " << b.desc << " r=" << b.r << " " << side
       << (toward ? " inward" : " outward") << ": rule verdict mismatch depth";
  rep.add(what.str(), mismatch, 0.0);
  return true;
}

}  // namespace

AuditReport audit_geometry(GeometrySuite suite, int count, std::uint64_t seed,
                           const GeometryAuditOptions& opts) {
  if (count < 1) throw DomainError("audit_geometry: count must be positive");
  if (opts.grid_n < 32) throw DomainError("audit_geometry: grid too coarse");
  if (opts.directions < 8) throw DomainError("audit_geometry: too few directions");
  if (!(opts.box_side > 0.0)) throw DomainError("audit_geometry: box side must be positive");

  GeomCtx g;
  g.grid = GridGeometry{{0.0, 0.0}, opts.box_side, opts.grid_n};
  g.directions = opts.directions;
  g.rng.seed(seed);

  AuditReport rep;
  rep.name = geometry_suite_name(suite);
  rep.seed = seed;
  rep.tolerance = 2.0 * std::sqrt(2.0) * g.grid.h();

  const int max_draws = 20 * count + 100;
  int draws = 0;
  while (rep.instances < count) {
    if (++draws > max_draws) throw StateError("audit_geometry: generator stalled");
    bool ran = false;
    switch (suite) {
      case GeometrySuite::DilationStability: ran = run_dilation_stability(g, rep); break;
      case GeometrySuite::BallInCone: ran = run_ball_in_cone(g, rep); break;
      case GeometrySuite::EscapeDirection: ran = run_escape_direction(g, rep); break;
      case GeometrySuite::GapComparability: ran = run_gap_comparability(g, rep); break;
      case GeometrySuite::RuleAgreement: ran = run_rule_agreement(g, rep); break;
    }
    if (ran) ++rep.instances;
  }
  rep.finalize();
  return rep;
}

std::string geometry_suite_name(GeometrySuite suite) {
  switch (suite) {
    case GeometrySuite::DilationStability: return "dilation_stability";
    case GeometrySuite::BallInCone: return "ball_in_cone";
    case GeometrySuite::EscapeDirection: return "escape_direction";
    case GeometrySuite::GapComparability: return "gap_comparability";
    case GeometrySuite::RuleAgreement: return "rule_agreement";
  }
  throw DomainError("geometry_suite_name: unknown suite");
}

}  // namespace specstab::lab
