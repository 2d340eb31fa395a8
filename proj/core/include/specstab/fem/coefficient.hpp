#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "specstab/errors.hpp"
#include "specstab/geom/grid.hpp"

namespace specstab::fem {

using geom::GridGeometry;
using geom::Point;

// Symmetric 2x2 coefficient field A(x) with its declared ellipticity constant
// alpha (x'Ax >= alpha|x|^2) and declared Lipschitz seminorm bound.  validate()
// checks symmetry, ellipticity, and a finite-difference Lipschitz estimate at
// the grid's quadrature points; violations raise CoefficientError.
class CoefficientField {
 public:
  using Evaluator = std::function<Eigen::Matrix2d(Point)>;

  static CoefficientField identity();
  static CoefficientField scaled_identity(double c);
  static CoefficientField diagonal(double a11, double a22);
  static CoefficientField custom(Evaluator f, double alpha, double lipschitz_bound,
                                 std::string label = "custom");

  Eigen::Matrix2d at(Point p) const { return eval_(p); }
  double alpha() const { return alpha_; }
  double lipschitz_bound() const { return lipschitz_; }
  bool is_constant() const { return constant_; }
  bool is_identity() const { return identity_; }
  const std::string& label() const { return label_; }

  void validate(const GridGeometry& grid) const;
  // Largest eigenvalue of A over the grid's quadrature points (upper form bound).
  double beta_on(const GridGeometry& grid) const;

 private:
  CoefficientField() = default;

  Evaluator eval_;
  double alpha_ = 1.0;
  double lipschitz_ = 0.0;
  bool constant_ = false;
  bool identity_ = false;
  std::string label_;
};

}  // namespace specstab::fem
