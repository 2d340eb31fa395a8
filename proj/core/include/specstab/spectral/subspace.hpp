#pragma once

#include <Eigen/Dense>

#include "specstab/fem/dirichlet.hpp"

namespace specstab::spectral {

// Energy-orthogonal projection of an ambient vector onto the restricted
// space, in the metric of the restriction's own stiffness.  Returns the
// projection in ambient coordinates.
Eigen::VectorXd project_energy(const fem::DirichletSystem& sys, const Eigen::VectorXd& u_ambient);

// Energy distance |u - P u|_K from an ambient vector to the restricted space.
double subspace_distance(const fem::DirichletSystem& sys, const Eigen::VectorXd& u_ambient);

// Finite-dimensional subspace of the ambient space, stored as a basis that is
// orthonormal in the chosen metric.  gram_condition is the spectral condition
// number of the generator Gram matrix.
struct SubspaceHandle {
  Eigen::MatrixXd basis;
  double gram_condition = 1.0;
};

// Orthonormalizes generator columns in the metric |.|_V of the given system;
// RankError when the generators are numerically dependent.
SubspaceHandle make_subspace(const fem::AmbientSystem& metric, const Eigen::MatrixXd& generators);

// Symmetric V-angle gap between equal-dimensional subspaces,
// sqrt(1 - sigma_min^2) of the cross Gram of orthonormal bases; 1 when the
// dimensions differ.
double generalized_angle(const fem::AmbientSystem& metric, const SubspaceHandle& a,
                         const SubspaceHandle& b);

}  // namespace specstab::spectral
