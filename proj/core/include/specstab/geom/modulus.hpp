#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "specstab/errors.hpp"

namespace specstab::geom {

enum class ModulusKind { Zero, Lipschitz, Hoelder, Tabulated };

// Modulus of continuity omega: nondecreasing, semi-additive
// (omega(a+b) <= omega(a)+omega(b)), omega(0) >= 0. The derived scales are
//   psi(r) = sqrt(r^2 + omega(r)^2),   phi(r) = r + omega(r),
// both strictly increasing; their inverses are computed by bisection to an
// absolute tolerance of 1e-12 * r_max.
class Modulus {
 public:
  static Modulus zero(double offset = 0.0, double r_max = kDefaultRMax);
  static Modulus lipschitz(double L, double offset = 0.0, double r_max = kDefaultRMax);
  static Modulus hoelder(double L, double alpha, double offset = 0.0,
                         double r_max = kDefaultRMax);
  // Piecewise-linear interpolation of (r_i, w_i) samples; validated for
  // monotonicity and sampled semi-additivity. r_max is the last abscissa.
  static Modulus tabulated(std::vector<std::pair<double, double>> samples);

  double operator()(double r) const;  // omega(r); DomainError outside [0, r_max]
  double psi(double r) const;
  double phi(double r) const;
  double psi_inv(double s) const;  // DomainError if s < psi(0)
  double phi_inv(double s) const;  // DomainError if s < phi(0)

  ModulusKind kind() const { return kind_; }
  double offset() const { return offset_; }  // omega(0)
  double r_max() const { return r_max_; }
  std::string describe() const;

  static constexpr double kDefaultRMax = 1e6;

 private:
  Modulus() = default;
  double invert(double (Modulus::*f)(double) const, double target) const;

  ModulusKind kind_ = ModulusKind::Zero;
  double L_ = 0.0;
  double alpha_ = 1.0;
  double offset_ = 0.0;
  double r_max_ = kDefaultRMax;
  std::vector<std::pair<double, double>> table_;
};

}  // namespace specstab::geom
