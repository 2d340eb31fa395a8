#include "specstab/spectral/subspace.hpp"

#include <cmath>

namespace specstab::spectral {

Eigen::VectorXd project_energy(const fem::DirichletSystem& sys, const Eigen::VectorXd& u_ambient) {
  if (u_ambient.size() != sys.ambient().size())
    throw DomainError("projection input does not match the ambient system");
  const Eigen::VectorXd rhs = sys.restrict_vector(sys.ambient().K() * u_ambient);
  return sys.extend(sys.solve_K(rhs));
}

double subspace_distance(const fem::DirichletSystem& sys, const Eigen::VectorXd& u_ambient) {
  const Eigen::VectorXd r = u_ambient - project_energy(sys, u_ambient);
  return sys.ambient().norm_V(r);
}

SubspaceHandle make_subspace(const fem::AmbientSystem& metric, const Eigen::MatrixXd& generators) {
  if (generators.cols() == 0) throw DomainError("subspace needs at least one generator");
  if (generators.rows() != metric.size())
    throw DomainError("subspace generators do not match the ambient system");
  Eigen::MatrixXd g = generators.transpose() * (metric.K() * generators);
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lo = ev(0);
  const double hi = ev(ev.size() - 1);
  if (!(hi > 0.0) || lo <= 1e-12 * hi)
    throw RankError("subspace generators are numerically dependent");
  SubspaceHandle out;
  out.basis = generators * es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
  out.gram_condition = hi / lo;
  return out;
}

double generalized_angle(const fem::AmbientSystem& metric, const SubspaceHandle& a,
                         const SubspaceHandle& b) {
  if (a.basis.cols() != b.basis.cols()) return 1.0;
  if (a.basis.rows() != metric.size() || b.basis.rows() != metric.size())
    throw DomainError("subspace bases do not match the ambient system");
  const Eigen::MatrixXd c = a.basis.transpose() * (metric.K() * b.basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  const double smin = std::min(1.0, svd.singularValues().minCoeff());
  return std::sqrt(std::max(0.0, 1.0 - smin * smin));
}

}  // namespace specstab::spectral
