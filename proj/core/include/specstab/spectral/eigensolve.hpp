#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "specstab/fem/dirichlet.hpp"

namespace specstab::spectral {

struct EigenOptions {
  int dense_threshold = 1200;  // direct dense solve up to this many unknowns
  std::uint64_t seed = 0;      // seeds the iterative solver's start block
  double cluster_tol = 1e-6;   // relative gap that merges eigenvalues into a cluster
  double residual_tol = 1e-8;
  int max_iterations = 500;
};

struct EigenResult {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors;    // columns M-orthonormal, kept-node coordinates
  Eigen::VectorXd residuals;  // |Kv - lambda Mv| / (|Kv| + lambda |Mv|) per pair
  std::vector<int> cluster;   // 0-based label per value, contiguous from 0
  int distinct_clusters() const { return cluster.empty() ? 0 : cluster.back() + 1; }
  // Kept-node indices of the members of one cluster.
  std::vector<int> cluster_members(int label) const;
};

// First k eigenpairs of K v = lambda M v on the restricted space.  Dense
// direct solve below the threshold, otherwise shift-invert subspace iteration
// with a seeded start; NumericsError if the iteration fails to converge.
EigenResult eigens(const fem::DirichletSystem& sys, int k, const EigenOptions& opts = {});

}  // namespace specstab::spectral
