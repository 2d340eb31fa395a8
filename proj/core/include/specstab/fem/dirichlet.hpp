#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "specstab/errors.hpp"
#include "specstab/fem/assembly.hpp"
#include "specstab/geom/raster.hpp"

namespace specstab::fem {

// Restriction of an ambient system to the span of basis functions supported
// inside a raster domain.  A node is kept iff its four adjacent cells all
// belong to the domain, so kept basis functions vanish outside it and the
// stiffness and mass are the principal submatrices on kept nodes.  Holds a
// reference to the ambient system, which must outlive the restriction.
class DirichletSystem {
 public:
  DirichletSystem(const AmbientSystem& ambient, geom::RasterSet domain);

  const AmbientSystem& ambient() const { return *ambient_; }
  const geom::RasterSet& domain() const { return domain_; }
  int size() const { return static_cast<int>(kept_.size()); }
  const std::vector<int>& kept() const { return kept_; }

  const SparseMat& K() const { return K_; }
  const SparseMat& M() const { return M_; }

  // Zero-extension of interior coefficients to the ambient index set.
  Eigen::VectorXd extend(const Eigen::VectorXd& u) const;
  // Gather of an ambient vector onto kept nodes.
  Eigen::VectorXd restrict_vector(const Eigen::VectorXd& a) const;
  // Weak load on kept nodes for nodal ambient data f: rows of M_ambient * f.
  Eigen::VectorXd load_vector(const Eigen::VectorXd& f_ambient) const;

  double norm_V(const Eigen::VectorXd& u) const;
  double norm_L2(const Eigen::VectorXd& u) const;

  // Solves K u = rhs on kept nodes with a cached factorization.
  Eigen::VectorXd solve_K(const Eigen::VectorXd& rhs) const;

 private:
  const Eigen::SimplicialLDLT<SparseMat>& ldlt() const;

  const AmbientSystem* ambient_;
  geom::RasterSet domain_;
  std::vector<int> kept_;
  SparseMat K_, M_;
  mutable std::unique_ptr<Eigen::SimplicialLDLT<SparseMat>> ldlt_;
};

DirichletSystem restrict_to(const AmbientSystem& ambient, const geom::RasterSet& domain);

// Coefficients of a member of the restricted space, stored both on kept nodes
// and as the exact zero-extension to ambient coordinates.
struct FieldVector {
  Eigen::VectorXd interior;
  Eigen::VectorXd ambient;
};

// Solves the Dirichlet problem K u = load(f) for nodal ambient data f.  The
// algebraic residual must satisfy |K u - rhs| <= 1e-10 |rhs| and the solution
// must satisfy the stability bound |u|_V <= alpha^{-1} |f|_{V'} in the metric
// companion norms; violations raise NumericsError.
FieldVector solve_dirichlet(const DirichletSystem& sys, const Eigen::VectorXd& f_ambient);

}  // namespace specstab::fem
