#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specstab/fem/coefficient.hpp"
#include "specstab/geom/raster.hpp"

namespace specstab::lab {

// One verified inequality instance, lhs <= rhs + tolerance of the owning
// report; slack = rhs - lhs.
struct AuditCheck {
  std::string what;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
};

struct AuditReport {
  std::string name;
  std::uint64_t seed = 0;
  int instances = 0;  // executed instances
  int rejected = 0;   // generator draws rejected by a precondition gate
  int banded = 0;     // negative slack within the tolerance band
  int failures = 0;   // slack below -tolerance
  double worst_slack = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool pass = false;
  std::vector<AuditCheck> details;

  // Appends a check and updates the counters; tolerance must be set first.
  void add(std::string what, double lhs, double rhs);
  // pass <=> no check fell below -tolerance; vacuously true when empty.
  void finalize();
};

// Solution-comparison audit: solves the same load on o1, o2, their raster
// intersection, and on dilations of each domain just large enough to cover
// the union, then verifies the three subspace comparison bounds
//   |u1-u2|_V <= sqrt(beta/alpha) (d(u1,I) + d(u2,I))          intersection
//   |u1-u2|_V <= sqrt(beta/alpha) (d(w1,V1) + d(w1,V2))        covering
//   |u1-u2|_V <= (beta/alpha)     (d(w1,V1) + d(w2,V2))        split covering
// where I restricts to the intersection, w1, w2 solve on the covering
// dilations of o1 resp. o2, distances and norms are taken in the system's own
// energy metric, and alpha, beta are the validated coefficient bounds.
// f holds nodal values on the ambient box.  EmptyDomain when the intersection
// has no interior nodes.
AuditReport audit_savare(const geom::RasterSet& o1, const geom::RasterSet& o2,
                         const fem::CoefficientField& coeff, const Eigen::VectorXd& f);

// Seeded batch of solution-comparison audits on square perturbations
// (equal pair, integer-cell translations, erosions, dilations) with identity
// and diag(1,4) coefficients and constant plus random loads.
AuditReport savare_suite(int count, std::uint64_t seed, int grid_n = 48);

struct BirkhoffNumbers {
  double An = 0.0;          // extremal energy-defect quotient
  double Bn = 0.0;          // extremal mass-defect quotient
  double p = 0.0;           // box constant of the identity companion
  double correction = 0.0;  // An / ((sqrt(p) - sqrt(Bn))^2 p)
  std::vector<double> lam1, lam2;
};

// Eigenvalue comparison audit: the span of the first n eigenvectors of o1 is
// projected onto the o2 space in the energy metric; the extremal defect
// quotients over the span give the minimal feasible A_n, B_n, and the bound
//   lambda_n(o1) >= lambda_n(o2) - A_n / ((sqrt(p) - sqrt(B_n))^2 p)
// is checked.  InapplicableError when B_n >= p (hypothesis fails, no verdict).
AuditReport audit_birkhoff(const geom::RasterSet& o1, const geom::RasterSet& o2,
                           const fem::CoefficientField& coeff, int n,
                           BirkhoffNumbers* numbers = nullptr);

enum class GeometrySuite {
  DilationStability,  // the cusp property survives dilation at the tested point
  BallInCone,         // offset ball inside the cone, continuum samples
  EscapeDirection,    // shift along the cusp direction escapes the dilated set
  GapComparability,   // co_gap bounded by phi of the gap
  RuleAgreement,      // both scan rules give the same verdict per direction
};

struct GeometryAuditOptions {
  int grid_n = 128;
  double box_side = 1.0;
  int directions = 64;
};

// Runs `count` seeded randomized instances of one geometric property suite on
// cusp-verified bases.  Draws with omega(0) > 0 are rejected by the
// precondition gate and counted; the tolerance band is 2*sqrt(2)*h.
AuditReport audit_geometry(GeometrySuite suite, int count, std::uint64_t seed,
                           const GeometryAuditOptions& opts = {});

std::string geometry_suite_name(GeometrySuite suite);

}  // namespace specstab::lab
