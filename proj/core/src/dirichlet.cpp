#include "specstab/fem/dirichlet.hpp"

#include <cmath>

namespace specstab::fem {

DirichletSystem::DirichletSystem(const AmbientSystem& ambient, geom::RasterSet domain)
    : ambient_(&ambient), domain_(std::move(domain)) {
  if (!(domain_.grid() == ambient.grid()))
    throw DomainError("restriction domain lives on a different grid");
  domain_.require_nonempty("restrict_to");
  domain_.require_margin("restrict_to");

  const int n = ambient.grid().n;
  for (int j = 1; j <= n - 1; ++j)
    for (int i = 1; i <= n - 1; ++i)
      if (domain_.at(i - 1, j - 1) && domain_.at(i, j - 1) && domain_.at(i - 1, j) &&
          domain_.at(i, j))
        kept_.push_back(ambient.node_index(i, j));
  if (kept_.empty()) throw EmptyDomain("restriction has no interior nodes");

  std::vector<int> pos(ambient.size(), -1);
  for (int k = 0; k < size(); ++k) pos[kept_[k]] = k;

  std::vector<Eigen::Triplet<double>> kt, mt;
  const SparseMat& ka = ambient.K();
  const SparseMat& ma = ambient.M();
  for (int col = 0; col < ka.outerSize(); ++col) {
    if (pos[col] < 0) continue;
    for (SparseMat::InnerIterator it(ka, col); it; ++it)
      if (pos[it.row()] >= 0) kt.emplace_back(pos[it.row()], pos[col], it.value());
    for (SparseMat::InnerIterator it(ma, col); it; ++it)
      if (pos[it.row()] >= 0) mt.emplace_back(pos[it.row()], pos[col], it.value());
  }
  K_.resize(size(), size());
  M_.resize(size(), size());
  K_.setFromTriplets(kt.begin(), kt.end());
  M_.setFromTriplets(mt.begin(), mt.end());
  K_.makeCompressed();
  M_.makeCompressed();
}

DirichletSystem restrict_to(const AmbientSystem& ambient, const geom::RasterSet& domain) {
  return DirichletSystem(ambient, domain);
}

Eigen::VectorXd DirichletSystem::extend(const Eigen::VectorXd& u) const {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(ambient_->size());
  for (int k = 0; k < size(); ++k) a[kept_[k]] = u[k];
  return a;
}

Eigen::VectorXd DirichletSystem::restrict_vector(const Eigen::VectorXd& a) const {
  Eigen::VectorXd u(size());
  for (int k = 0; k < size(); ++k) u[k] = a[kept_[k]];
  return u;
}

Eigen::VectorXd DirichletSystem::load_vector(const Eigen::VectorXd& f_ambient) const {
  return restrict_vector(ambient_->M() * f_ambient);
}

double DirichletSystem::norm_V(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(K_ * u)));
}

double DirichletSystem::norm_L2(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(M_ * u)));
}

const Eigen::SimplicialLDLT<SparseMat>& DirichletSystem::ldlt() const {
  if (!ldlt_) {
    ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMat>>(K_);
    if (ldlt_->info() != Eigen::Success)
      throw NumericsError("restricted stiffness factorization failed");
  }
  return *ldlt_;
}

Eigen::VectorXd DirichletSystem::solve_K(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = ldlt().solve(rhs);
  if (ldlt_->info() != Eigen::Success) throw NumericsError("restricted solve failed");
  return x;
}

FieldVector solve_dirichlet(const DirichletSystem& sys, const Eigen::VectorXd& f_ambient) {
  if (f_ambient.size() != sys.ambient().size())
    throw DomainError("load vector size does not match the ambient system");
  const Eigen::VectorXd rhs = sys.load_vector(f_ambient);
  FieldVector u;
  u.interior = sys.solve_K(rhs);
  const double res = (sys.K() * u.interior - rhs).norm();
  if (res > 1e-10 * std::max(rhs.norm(), 1e-300))
    throw NumericsError("Dirichlet solve residual exceeds tolerance");
  u.ambient = sys.extend(u.interior);

  // Stability of the resolvent in the metric norms: the form bound
  // alpha |v|_G^2 <= Phi(v, v) gives |u|_G <= alpha^{-1} |f|_{V',G}.
  const AmbientSystem& g = sys.ambient().metric_companion();
  const double lhs = g.norm_V(u.ambient);
  const double bound = g.dual_norm_Vprime(f_ambient) / sys.ambient().coeff().alpha();
  if (lhs > bound * (1.0 + 1e-9) + 1e-12)
    throw NumericsError("Dirichlet solve violates the stability bound");
  return u;
}

}  // namespace specstab::fem
