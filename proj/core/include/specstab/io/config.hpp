#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specstab/fem/coefficient.hpp"
#include "specstab/geom/cusp.hpp"
#include "specstab/geom/grid.hpp"
#include "specstab/geom/modulus.hpp"
#include "specstab/geom/shapes.hpp"
#include "specstab/lab/audit.hpp"
#include "specstab/lab/family.hpp"

namespace specstab::io {

inline constexpr int kSchemaVersion = 1;

enum class Command { Metrics, Cusp, Eig, Poisson, Sweep, Audit };
enum class SweepKind { Eigenvalue, Resolvent, Angle };
enum class AuditKind {
  Savare,
  Birkhoff,
  DilationStability,
  BallInCone,
  EscapeDirection,
  GapComparability,
  RuleAgreement,
};

const char* command_name(Command c);
const char* sweep_kind_name(SweepKind k);
const char* audit_kind_name(AuditKind k);

// Validated run description parsed from a JSON config.  Unknown keys are
// rejected; every missing scalar falls back to the default recorded here.
// canonical is the normalized config text (schema + seed filled in, keys
// sorted) and hash its FNV-1a fingerprint; the run manifest embeds both.
struct RunConfig {
  Command command = Command::Eig;
  std::uint64_t seed = 0;
  std::string out;  // optional preset output directory; the CLI flag wins

  geom::GridGeometry grid{};
  std::optional<geom::ShapeSpec> shape, shape2;
  geom::Modulus omega = geom::Modulus::lipschitz(1.0);
  fem::CoefficientField coeff = fem::CoefficientField::identity();

  double cusp_r = 0.05;
  geom::CuspOptions cusp{};

  int eig_k = 1;
  double load = 1.0;

  std::vector<double> schedule;
  lab::FamilyKind family_kind = lab::FamilyKind::Erode;
  geom::Modulus bump_profile = geom::Modulus::lipschitz(1.0);
  double bump_base_level = 0.5;
  double bump_rho = 1.0;

  SweepKind sweep_kind = SweepKind::Eigenvalue;
  int n_max = 1;
  int cluster_index = 1;
  double isolation_radius = 0.0;
  bool resolution_check = false;

  AuditKind audit_kind = AuditKind::Savare;
  int audit_count = 50;
  int audit_n = 1;

  bool export_matrices = false;
  bool export_field = false;

  std::string canonical;
  std::string hash;

  // Family assembled from shape, schedule, omega, cusp_r, and the bump knobs.
  lab::FamilySpec family_spec() const;
};

// ConfigError on parse failure (line/column in the message) or on any schema
// violation (offending field path in the message).
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

// Command-line overrides; rewrites canonical and hash so the manifest still
// reproduces the run exactly.
void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     bool resolution_check);

std::uint64_t fnv1a(const std::string& data);

}  // namespace specstab::io
