#include "specstab/fem/coefficient.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace specstab::fem {

namespace {

// 2x2 Gauss points on a cell, the quadrature used for assembly.
std::vector<Point> quadrature_points(const GridGeometry& grid, int ci, int cj) {
  const double h = grid.h();
  const double g = 0.5 / std::sqrt(3.0);
  const Point c = grid.center(ci, cj);
  return {{c.x - g * h, c.y - g * h},
          {c.x + g * h, c.y - g * h},
          {c.x - g * h, c.y + g * h},
          {c.x + g * h, c.y + g * h}};
}

}  // namespace

CoefficientField CoefficientField::identity() {
  CoefficientField f;
  f.eval_ = [](Point) { return Eigen::Matrix2d::Identity().eval(); };
  f.alpha_ = 1.0;
  f.lipschitz_ = 0.0;
  f.constant_ = true;
  f.identity_ = true;
  f.label_ = "identity";
  return f;
}

CoefficientField CoefficientField::scaled_identity(double c) {
  if (!(c > 0.0)) throw CoefficientError("scaled identity coefficient must be positive");
  CoefficientField f;
  f.eval_ = [c](Point) { return (c * Eigen::Matrix2d::Identity()).eval(); };
  f.alpha_ = c;
  f.lipschitz_ = 0.0;
  f.constant_ = true;
  f.identity_ = (c == 1.0);
  f.label_ = "scaled_identity";
  return f;
}

CoefficientField CoefficientField::diagonal(double a11, double a22) {
  if (!(a11 > 0.0) || !(a22 > 0.0)) throw CoefficientError("diagonal coefficient entries must be positive");
  CoefficientField f;
  f.eval_ = [a11, a22](Point) {
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    m(0, 0) = a11;
    m(1, 1) = a22;
    return m;
  };
  f.alpha_ = std::min(a11, a22);
  f.lipschitz_ = 0.0;
  f.constant_ = true;
  f.identity_ = (a11 == 1.0 && a22 == 1.0);
  f.label_ = "diagonal";
  return f;
}

CoefficientField CoefficientField::custom(Evaluator fn, double alpha, double lipschitz_bound,
                                          std::string label) {
  if (!fn) throw CoefficientError("custom coefficient requires an evaluator");
  if (!(alpha > 0.0)) throw CoefficientError("ellipticity constant must be positive");
  if (!(lipschitz_bound >= 0.0)) throw CoefficientError("Lipschitz bound must be >= 0");
  CoefficientField f;
  f.eval_ = std::move(fn);
  f.alpha_ = alpha;
  f.lipschitz_ = lipschitz_bound;
  f.constant_ = false;
  f.identity_ = false;
  f.label_ = std::move(label);
  return f;
}

void CoefficientField::validate(const GridGeometry& grid) const {
  const double sym_tol = 1e-10;
  const double lip_slack = 1e-8;
  std::vector<std::pair<Point, Eigen::Matrix2d>> probes;
  for (int cj = 0; cj < grid.n; ++cj) {
    for (int ci = 0; ci < grid.n; ++ci) {
      for (const Point& q : quadrature_points(grid, ci, cj)) {
        Eigen::Matrix2d a = eval_(q);
        if (!a.allFinite()) throw CoefficientError("coefficient is not finite at a quadrature point");
        const double scale = 1.0 + a.cwiseAbs().maxCoeff();
        if (std::abs(a(0, 1) - a(1, 0)) > sym_tol * scale)
          throw CoefficientError("coefficient is not symmetric at a quadrature point");
        Eigen::Matrix2d s = 0.5 * (a + a.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(s);
        if (es.eigenvalues()(0) < alpha_ * (1.0 - 1e-10))
          throw CoefficientError("coefficient violates the declared ellipticity constant");
        if (!constant_) probes.emplace_back(q, s);
      }
    }
  }
  if (constant_ || probes.empty()) return;
  // Finite-difference Lipschitz estimate between horizontally adjacent
  // quadrature points; a sampled lower bound for the true seminorm.
  const double h = grid.h();
  for (const auto& [p, a] : probes) {
    const Point p2{p.x + h, p.y};
    if (p2.x > grid.origin.x + grid.side) continue;
    Eigen::Matrix2d a2 = 0.5 * (eval_(p2) + eval_(p2).transpose());
    const double diff = (a2 - a).norm();
    if (diff > lipschitz_ * h + lip_slack * (1.0 + lipschitz_))
      throw CoefficientError("coefficient violates the declared Lipschitz bound");
  }
}

double CoefficientField::beta_on(const GridGeometry& grid) const {
  double beta = 0.0;
  if (constant_) {
    Eigen::Matrix2d a = eval_(grid.center(0, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (a + a.transpose()));
    return es.eigenvalues()(1);
  }
  for (int cj = 0; cj < grid.n; ++cj) {
    for (int ci = 0; ci < grid.n; ++ci) {
      for (const Point& q : quadrature_points(grid, ci, cj)) {
        Eigen::Matrix2d a = eval_(q);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (a + a.transpose()));
        beta = std::max(beta, es.eigenvalues()(1));
      }
    }
  }
  return beta;
}

}  // namespace specstab::fem
