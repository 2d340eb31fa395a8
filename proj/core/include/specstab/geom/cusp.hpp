#pragma once

#include <string>
#include <vector>

#include "specstab/geom/modulus.hpp"
#include "specstab/geom/raster.hpp"

namespace specstab::geom {

// Cusp cone C(xi) = S u F in the frame where xi is the distinguished axis:
//   F = { |z| < psi(r), z.xi >= omega(r) }
//   S = { |z_perp| < r, omega(|z_perp|) < z.xi < omega(r) }
// xi is the outward direction at a boundary point.
struct CuspCone {
  Modulus modulus;
  double r = 0.0;
  Vec2 xi{0.0, 1.0};
};

// Normalizes xi (DomainError on the zero vector), validates r in (0, r_max].
CuspCone make_cone(Modulus m, double r, Vec2 xi);

bool cone_contains(const CuspCone& cone, Point z);

// Verification route: W1 tests [(B3 ^ X) - C] ^ B2 subset X; W2 tests
// [(B3 \ X) + C] ^ (B2 ^ X) empty.  B_k = ball of radius k*psi(r).
enum class CuspRule { W1, W2 };

struct CuspOptions {
  int directions = 64;  // uniform angular direction lattice
  CuspRule rule = CuspRule::W1;
};

struct CuspSampleRecord {
  Point x{};
  bool found = false;
  Vec2 xi{};            // passing direction when found
  double margin = 0.0;  // 0 when found, else -(least worst violation depth over directions)
  Point worst_inner{};  // violating in-domain sample of the best failing direction
  Point worst_outer{};  // its paired complement sample
};

struct CuspReport {
  bool pass = false;
  double r = 0.0;
  int directions = 0;
  CuspRule rule = CuspRule::W1;
  std::string modulus;
  std::vector<CuspSampleRecord> records;

  std::string to_json() const;
};

// Whole-boundary check: every sampled boundary cell (both one-cell layers)
// must admit a direction on the lattice under which the selected rule holds
// on the sample set.  DomainError when B_{3psi(r)} does not fit in the box
// around a tested point.
CuspReport cusp_check(const RasterSet& X, const Modulus& m, double r,
                      const CuspOptions& opts = {});

// Same check at a single point.
CuspSampleRecord cusp_check_at(const RasterSet& X, Point x, const Modulus& m, double r,
                               const CuspOptions& opts = {});

// Lattice offsets o (cell units) with o*h inside the cone; shared by the
// checker and the brute-force test oracles.
std::vector<std::pair<int, int>> cone_lattice_offsets(const CuspCone& cone, double h);

// Verdict of one rule at one point for one fixed cone direction; depth is the
// worst violation depth in length units (0 when the rule holds).
struct DirectionVerdict {
  bool pass = true;
  double depth = 0.0;
  Point inner{}, outer{};
};

DirectionVerdict cusp_direction_verdict(const RasterSet& X, Point x, const CuspCone& cone,
                                        CuspRule rule);

}  // namespace specstab::geom
