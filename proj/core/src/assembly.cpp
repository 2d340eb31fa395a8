#include "specstab/fem/assembly.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace specstab::fem {

namespace {

struct RefPoint {
  double xi, eta, w;
};

// Reference nodes in local order SW, SE, NE, NW.
constexpr std::array<double, 4> kXi{-1.0, 1.0, 1.0, -1.0};
constexpr std::array<double, 4> kEta{-1.0, -1.0, 1.0, 1.0};

std::vector<RefPoint> gauss_points() {
  const double g = 1.0 / std::sqrt(3.0);
  return {{-g, -g, 1.0}, {g, -g, 1.0}, {-g, g, 1.0}, {g, g, 1.0}};
}

double shape(int k, double xi, double eta) {
  return 0.25 * (1.0 + kXi[k] * xi) * (1.0 + kEta[k] * eta);
}

Eigen::Vector2d shape_grad(int k, double xi, double eta) {
  return {0.25 * kXi[k] * (1.0 + kEta[k] * eta), 0.25 * kEta[k] * (1.0 + kXi[k] * xi)};
}

}  // namespace

AmbientSystem::AmbientSystem(GridGeometry grid, CoefficientField coeff, Quadrature quad)
    : grid_(grid), coeff_(std::move(coeff)), quad_(quad) {
  if (grid_.n < 2) throw DomainError("ambient grid needs at least one interior node");
  coeff_.validate(grid_);
  assemble();
}

void AmbientSystem::assemble() {
  const int n = grid_.n;
  const double h = grid_.h();
  const std::vector<RefPoint> mass_rule = gauss_points();
  std::vector<RefPoint> stiff_rule =
      quad_ == Quadrature::Gauss2x2 ? mass_rule : std::vector<RefPoint>{{0.0, 0.0, 4.0}};

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(static_cast<std::size_t>(n) * n * 16);
  mt.reserve(static_cast<std::size_t>(n) * n * 16);

  Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
  for (const RefPoint& q : mass_rule)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        me(a, b) += q.w * (h * h / 4.0) * shape(a, q.xi, q.eta) * shape(b, q.xi, q.eta);

  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      const geom::Point c = grid_.center(ci, cj);
      Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
      for (const RefPoint& q : stiff_rule) {
        const geom::Point x{c.x + 0.5 * h * q.xi, c.y + 0.5 * h * q.eta};
        Eigen::Matrix2d a = coeff_.at(x);
        a = 0.5 * (a + a.transpose()).eval();
        Eigen::Matrix<double, 2, 4> b;
        for (int k = 0; k < 4; ++k) b.col(k) = shape_grad(k, q.xi, q.eta);
        ke += q.w * (b.transpose() * a * b);
      }
      ke = 0.5 * (ke + ke.transpose()).eval();

      std::array<int, 4> node{};
      for (int k = 0; k < 4; ++k) {
        const int ni = ci + (kXi[k] > 0 ? 1 : 0);
        const int nj = cj + (kEta[k] > 0 ? 1 : 0);
        const bool interior = ni >= 1 && ni <= n - 1 && nj >= 1 && nj <= n - 1;
        node[k] = interior ? node_index(ni, nj) : -1;
      }
      for (int a = 0; a < 4; ++a) {
        if (node[a] < 0) continue;
        for (int b = 0; b < 4; ++b) {
          if (node[b] < 0) continue;
          kt.emplace_back(node[a], node[b], ke(a, b));
          mt.emplace_back(node[a], node[b], me(a, b));
        }
      }
    }
  }

  K_.resize(size(), size());
  M_.resize(size(), size());
  K_.setFromTriplets(kt.begin(), kt.end());
  M_.setFromTriplets(mt.begin(), mt.end());
  K_.makeCompressed();
  M_.makeCompressed();
}

const Eigen::SimplicialLDLT<SparseMat>& AmbientSystem::ldlt() const {
  if (!ldlt_) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMat>>(K_);
    if (ldlt_->info() != Eigen::Success)
      throw NumericsError("ambient stiffness factorization failed");
  }
  return *ldlt_;
}

Eigen::VectorXd AmbientSystem::solve_K(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = ldlt().solve(rhs);
  if (ldlt_->info() != Eigen::Success) throw NumericsError("ambient solve failed");
  return x;
}

Eigen::VectorXd AmbientSystem::solve_ambient(const Eigen::VectorXd& f) const {
  return solve_K(M_ * f);
}

double AmbientSystem::compute_friedrichs() const {
  if (has_p_) return p_;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(size());
  double mu = 0.0;
  bool converged = false;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd y = solve_K(M_ * x);
    const double nrm = std::sqrt(y.dot(M_ * y));
    if (!(nrm > 0.0)) throw NumericsError("Friedrichs iteration degenerated");
    x = y / nrm;
    const double mu_new = x.dot(K_ * x) / x.dot(M_ * x);
    if (it > 0 && std::abs(mu_new - mu) <= 1e-13 * mu_new) {
      mu = mu_new;
      converged = true;
      break;
    }
    mu = mu_new;
  }
  if (!converged) throw NumericsError("Friedrichs iteration did not converge");
  p_ = 1.0 / mu;
  has_p_ = true;
  return p_;
}

double AmbientSystem::friedrichs() const {
  if (!has_p_) throw StateError("Friedrichs constant not computed yet");
  return p_;
}

double AmbientSystem::norm_V(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(K_ * u)));
}

double AmbientSystem::norm_L2(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(M_ * u)));
}

double AmbientSystem::norm_L(const Eigen::VectorXd& u) const {
  return std::sqrt(friedrichs()) * norm_L2(u);
}

double AmbientSystem::dual_norm_Vprime(const Eigen::VectorXd& f) const {
  const Eigen::VectorXd mf = M_ * f;
  return std::sqrt(std::max(0.0, mf.dot(solve_K(mf))));
}

double AmbientSystem::dual_norm_Vprime_functional(const Eigen::VectorXd& b) const {
  return std::sqrt(std::max(0.0, b.dot(solve_K(b))));
}

double AmbientSystem::dual_norm_Lprime(const Eigen::VectorXd& f) const {
  return norm_L2(f) / std::sqrt(friedrichs());
}

const AmbientSystem& AmbientSystem::metric_companion() const {
  if (coeff_.is_identity()) return *this;
  if (!companion_)
    companion_ = std::make_unique<AmbientSystem>(grid_, CoefficientField::identity(),
                                                 Quadrature::Gauss2x2);
  return *companion_;
}

double friedrichs_constant(const AmbientSystem& sys) { return sys.compute_friedrichs(); }

}  // namespace specstab::fem
