#pragma once

#include <memory>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "specstab/errors.hpp"
#include "specstab/fem/coefficient.hpp"
#include "specstab/geom/grid.hpp"

namespace specstab::fem {

using SparseMat = Eigen::SparseMatrix<double>;

// Quadrature used for the stiffness form.  The mass matrix is always
// integrated with the 2x2 Gauss rule, which is exact for bilinear elements and
// keeps it positive definite; the midpoint option is a diagnostic mode for the
// stiffness only.
enum class Quadrature { Gauss2x2, Midpoint };

// Bilinear finite elements on the full box with homogeneous Dirichlet data on
// the frame.  Unknowns are the (n-1)^2 interior box nodes, indexed
// row-major by node coordinates (i, j) in [1, n-1].
class AmbientSystem {
 public:
  AmbientSystem(GridGeometry grid, CoefficientField coeff,
                Quadrature quad = Quadrature::Gauss2x2);

  const GridGeometry& grid() const { return grid_; }
  const CoefficientField& coeff() const { return coeff_; }
  Quadrature quadrature() const { return quad_; }
  int nodes_per_side() const { return grid_.n - 1; }
  int size() const { return nodes_per_side() * nodes_per_side(); }
  int node_index(int i, int j) const {
    return (j - 1) * nodes_per_side() + (i - 1);
  }
  geom::Point node_point(int idx) const {
    const int m = nodes_per_side();
    return grid_.node(idx % m + 1, idx / m + 1);
  }

  const SparseMat& K() const { return K_; }
  const SparseMat& M() const { return M_; }

  // Friedrichs constant p = 1 / lambda_min(K, M) of the box system, computed
  // on demand by inverse iteration and cached.  norm_L and dual_norm_Lprime
  // require it; has_friedrichs tells whether it is already available.
  double friedrichs() const;
  bool has_friedrichs() const { return has_p_; }
  double compute_friedrichs() const;

  double norm_V(const Eigen::VectorXd& u) const;
  double norm_L2(const Eigen::VectorXd& u) const;
  double norm_L(const Eigen::VectorXd& u) const;   // sqrt(p) * norm_L2; StateError if p unset
  // |f|_{V'} for nodal data f, i.e. sqrt(f' M K^{-1} M f).
  double dual_norm_Vprime(const Eigen::VectorXd& f) const;
  // |b|_{V'} for an assembled functional b (b_i = <f, phi_i>), sqrt(b' K^{-1} b).
  double dual_norm_Vprime_functional(const Eigen::VectorXd& b) const;
  double dual_norm_Lprime(const Eigen::VectorXd& f) const;  // p^{-1/2} * norm_L2

  // Solves K x = rhs with a cached factorization.
  Eigen::VectorXd solve_K(const Eigen::VectorXd& rhs) const;
  // Box solve u = G(f; V_box) for nodal data f: K u = M f.
  Eigen::VectorXd solve_ambient(const Eigen::VectorXd& f) const;

  // System on the same grid with the identity coefficient, used as the metric
  // space for norms and projections.  Returns *this when the coefficient is
  // already the identity.  The companion is built lazily and cached; caching
  // is not thread safe.
  const AmbientSystem& metric_companion() const;

 private:
  void assemble();
  const Eigen::SimplicialLDLT<SparseMat>& ldlt() const;

  GridGeometry grid_;
  CoefficientField coeff_;
  Quadrature quad_;
  SparseMat K_, M_;
  mutable std::unique_ptr<Eigen::SimplicialLDLT<SparseMat>> ldlt_;
  mutable std::unique_ptr<AmbientSystem> companion_;
  mutable double p_ = 0.0;
  mutable bool has_p_ = false;
};

// Computes and caches the Friedrichs constant of the system's box.
double friedrichs_constant(const AmbientSystem& sys);

}  // namespace specstab::fem
