#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "specstab/fem/coefficient.hpp"
#include "specstab/lab/family.hpp"
#include "specstab/spectral/eigensolve.hpp"

namespace specstab::lab {

struct SweepOptions {
  std::uint64_t seed = 0;
  bool resolution_check = false;  // re-measure on the half-step grid
  bool validate_cusp = true;      // require the base to pass the cusp check
  int n_max = 1;                  // eigenvalue count for eigenvalue sweeps
  int cluster_index = 1;          // angle sweeps: k-th eigenvalue cluster, ascending
  double isolation_radius = 0.0;  // angle sweeps: 0 selects 0.4x the cluster gap
  spectral::EigenOptions eig{};
};

// One schedule entry of a sweep.  value is the primary measurement of the
// sweep kind (|dlambda_1|, |u1-u2|_V^2, or the subspace angle), bound the
// comparator it is tested against, ratio their quotient.
struct SweepRecord {
  double eps = 0;       // nominal family parameter
  double eps_meas = 0;  // measured perturbation size used in the comparator
  double d_h = 0, d_open = 0, d_hp = 0, d_hs = 0;
  double e_sym_bd = 0;  // gap(symmetric difference, boundary of base)
  std::vector<double> lambda_base, lambda_pert, dlambda;
  double value = 0;
  double bound = 0;
  double ratio = 0;
  double bound_dhs = 0, ratio_dhs = 0;
  bool flagged = false;  // measurement not stable under grid refinement
};

struct FitResult {
  double slope = 0, intercept = 0, rms = 0;
  int points = 0;
};

// Least-squares line through (log x, log y); DomainError with fewer than
// three strictly positive points.
FitResult fit_slope(const std::vector<std::array<double, 2>>& pts);

struct SweepResult {
  std::vector<SweepRecord> records;  // schedule order
  std::vector<SweepRecord> refined;  // half-step re-measurement when requested
  FitResult fit;                     // log-log fit of value vs bound (unflagged records)
  double ratio_max = 0, ratio_median = 0;
  double ratio_max_refined = 0, ratio_median_refined = 0;
  int flagged = 0;
  std::uint64_t seed = 0;
};

// |dlambda_n| along the family vs the comparator omega(eps_meas) + eps_meas
// with eps_meas = d^HP.  Members whose |dlambda_1| moves more than 10% under
// grid refinement are flagged and excluded from the fit; ResolutionError if
// every member is flagged.
SweepResult eigen_stability_sweep(const PerturbationFamily& fam,
                                  const fem::CoefficientField& coeff,
                                  const SweepOptions& opts = {});

// |u1-u2|_V^2 for the load f vs phi(eps_meas)|f|_{L'}|f|_{V'} with eps_meas =
// gap(symmetric difference, boundary of base); the d_HS comparator variant is
// recorded alongside.
SweepResult resolvent_sweep(const PerturbationFamily& fam, const fem::CoefficientField& coeff,
                            const std::function<double(geom::Point)>& f,
                            const SweepOptions& opts = {});

// V-angle between the k-th eigenspace of the base and the spectral cluster of
// the member inside the isolation disk, vs phi(eps_meas); GapError when the
// disk of twice the isolation radius does not isolate the base cluster.
SweepResult angle_sweep(const PerturbationFamily& fam, const fem::CoefficientField& coeff,
                        const SweepOptions& opts = {});

}  // namespace specstab::lab
