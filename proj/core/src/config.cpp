#include "specstab/io/config.hpp"

#include <cstdio>
#include <initializer_list>
#include <utility>

#include <json.hpp>

#include "specstab/errors.hpp"
#include "specstab/io/csv.hpp"

namespace specstab::io {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("field '" + path + "': " + msg);
}

void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) fail(join(path, item.key()), "unknown key");
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "required");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

geom::Point as_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
}

double opt_double(const json& obj, const std::string& path, const char* key, double def) {
  auto it = obj.find(key);
  return it == obj.end() ? def : as_double(*it, join(path, key));
}

int opt_int(const json& obj, const std::string& path, const char* key, int def) {
  auto it = obj.find(key);
  return it == obj.end() ? def : as_int(*it, join(path, key));
}

geom::GridGeometry parse_grid(const json& j, const std::string& path) {
  check_object(j, path);
  check_keys(j, path, {"origin", "side", "n"});
  geom::Point origin{0.0, 0.0};
  if (j.contains("origin")) origin = as_point(j["origin"], join(path, "origin"));
  const double side = opt_double(j, path, "side", 1.0);
  if (!(side > 0.0)) fail(join(path, "side"), "expected side > 0");
  const int n = as_int(member(j, path, "n"), join(path, "n"));
  if (n < 4) fail(join(path, "n"), "expected n >= 4");
  return geom::GridGeometry(origin, side, n);
}

geom::ShapeSpec parse_shape(const json& j, const std::string& path,
                            const geom::GridGeometry& grid) {
  check_object(j, path);
  const std::string kind = as_string(member(j, path, "kind"), join(path, "kind"));
  try {
    if (kind == "box") {
      check_keys(j, path, {"kind"});
      const geom::Point hi{grid.origin.x + grid.side, grid.origin.y + grid.side};
      return geom::ShapeSpec::rectangle(grid.origin, hi);
    }
    if (kind == "rectangle") {
      check_keys(j, path, {"kind", "lo", "hi"});
      return geom::ShapeSpec::rectangle(as_point(member(j, path, "lo"), join(path, "lo")),
                                        as_point(member(j, path, "hi"), join(path, "hi")));
    }
    if (kind == "disk") {
      check_keys(j, path, {"kind", "center", "radius"});
      return geom::ShapeSpec::disk(as_point(member(j, path, "center"), join(path, "center")),
                                   as_double(member(j, path, "radius"), join(path, "radius")));
    }
    if (kind == "polygon") {
      check_keys(j, path, {"kind", "vertices"});
      const json& vs = member(j, path, "vertices");
      if (!vs.is_array() || vs.size() < 3) fail(join(path, "vertices"), "expected >= 3 points");
      std::vector<geom::Point> pts;
      for (std::size_t i = 0; i < vs.size(); ++i)
        pts.push_back(as_point(vs[i], join(path, "vertices") + "[" + std::to_string(i) + "]"));
      return geom::ShapeSpec::polygon(std::move(pts));
    }
    if (kind == "union" || kind == "intersection" || kind == "difference") {
      check_keys(j, path, {"kind", "a", "b"});
      auto a = parse_shape(member(j, path, "a"), join(path, "a"), grid);
      auto b = parse_shape(member(j, path, "b"), join(path, "b"), grid);
      if (kind == "union") return geom::ShapeSpec::unite(std::move(a), std::move(b));
      if (kind == "intersection") return geom::ShapeSpec::intersect(std::move(a), std::move(b));
      return geom::ShapeSpec::subtract(std::move(a), std::move(b));
    }
    if (kind == "translate") {
      check_keys(j, path, {"kind", "of", "shift"});
      return geom::ShapeSpec::translate(parse_shape(member(j, path, "of"), join(path, "of"), grid),
                                        as_point(member(j, path, "shift"), join(path, "shift")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(join(path, "kind"), "unknown shape kind '" + kind + "'");
}

geom::Modulus parse_modulus(const json& j, const std::string& path) {
  check_object(j, path);
  const std::string kind = as_string(member(j, path, "kind"), join(path, "kind"));
  try {
    if (kind == "zero") {
      check_keys(j, path, {"kind", "offset", "r_max"});
      return geom::Modulus::zero(opt_double(j, path, "offset", 0.0),
                                 opt_double(j, path, "r_max", geom::Modulus::kDefaultRMax));
    }
    if (kind == "lipschitz") {
      check_keys(j, path, {"kind", "slope", "offset", "r_max"});
      return geom::Modulus::lipschitz(as_double(member(j, path, "slope"), join(path, "slope")),
                                      opt_double(j, path, "offset", 0.0),
                                      opt_double(j, path, "r_max", geom::Modulus::kDefaultRMax));
    }
    if (kind == "hoelder") {
      check_keys(j, path, {"kind", "coefficient", "exponent", "offset", "r_max"});
      return geom::Modulus::hoelder(
          as_double(member(j, path, "coefficient"), join(path, "coefficient")),
          as_double(member(j, path, "exponent"), join(path, "exponent")),
          opt_double(j, path, "offset", 0.0),
          opt_double(j, path, "r_max", geom::Modulus::kDefaultRMax));
    }
    if (kind == "tabulated") {
      check_keys(j, path, {"kind", "samples"});
      const json& ss = member(j, path, "samples");
      if (!ss.is_array() || ss.size() < 2) fail(join(path, "samples"), "expected >= 2 [r, w] pairs");
      std::vector<std::pair<double, double>> samples;
      for (std::size_t i = 0; i < ss.size(); ++i) {
        const auto p = as_point(ss[i], join(path, "samples") + "[" + std::to_string(i) + "]");
        samples.emplace_back(p.x, p.y);
      }
      return geom::Modulus::tabulated(std::move(samples));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(join(path, "kind"), "unknown modulus kind '" + kind + "'");
}

fem::CoefficientField parse_coeff(const json& j, const std::string& path) {
  check_object(j, path);
  const std::string kind = as_string(member(j, path, "kind"), join(path, "kind"));
  try {
    if (kind == "identity") {
      check_keys(j, path, {"kind"});
      return fem::CoefficientField::identity();
    }
    if (kind == "scaled") {
      check_keys(j, path, {"kind", "value"});
      return fem::CoefficientField::scaled_identity(
          as_double(member(j, path, "value"), join(path, "value")));
    }
    if (kind == "diagonal") {
      check_keys(j, path, {"kind", "a11", "a22"});
      return fem::CoefficientField::diagonal(as_double(member(j, path, "a11"), join(path, "a11")),
                                             as_double(member(j, path, "a22"), join(path, "a22")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(join(path, "kind"), "unknown coefficient kind '" + kind + "'");
}

template <typename T>
T parse_name(const std::string& s, const std::string& path,
             std::initializer_list<std::pair<const char*, T>> table, const char* what) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  fail(path, std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Metrics: return "metrics";
    case Command::Cusp: return "cusp";
    case Command::Eig: return "eig";
    case Command::Poisson: return "poisson";
    case Command::Sweep: return "sweep";
    case Command::Audit: return "audit";
  }
  return "?";
}

const char* sweep_kind_name(SweepKind k) {
  switch (k) {
    case SweepKind::Eigenvalue: return "eigenvalue";
    case SweepKind::Resolvent: return "resolvent";
    case SweepKind::Angle: return "angle";
  }
  return "?";
}

const char* audit_kind_name(AuditKind k) {
  switch (k) {
    case AuditKind::Savare: return "solution_comparison";
    case AuditKind::Birkhoff: return "eigenvalue_lower_bound";
    case AuditKind::DilationStability: return "dilation_stability";
    case AuditKind::BallInCone: return "ball_in_cone";
    case AuditKind::EscapeDirection: return "escape_direction";
    case AuditKind::GapComparability: return "gap_comparability";
    case AuditKind::RuleAgreement: return "rule_agreement";
  }
  return "?";
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

lab::FamilySpec RunConfig::family_spec() const {
  lab::FamilySpec s;
  s.kind = family_kind;
  if (shape) s.base = *shape;
  s.schedule = schedule;
  s.omega = omega;
  s.cusp_r = cusp_r;
  s.profile_modulus = bump_profile;
  s.bump_base_level = bump_base_level;
  s.bump_rho = bump_rho;
  return s;
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root: expected an object");
  check_keys(j, "",
             {"schema", "command", "seed", "out", "grid", "shape", "shape2", "modulus",
              "coefficient", "cusp", "eig", "poisson", "schedule", "family", "sweep", "audit",
              "resolution_check", "export"});

  RunConfig cfg;
  if (j.contains("schema")) {
    const int s = as_int(j["schema"], "schema");
    if (s != kSchemaVersion) fail("schema", "unsupported schema version " + std::to_string(s));
  }
  cfg.command = parse_name<Command>(as_string(member(j, "", "command"), "command"), "command",
                                    {{"metrics", Command::Metrics},
                                     {"cusp", Command::Cusp},
                                     {"eig", Command::Eig},
                                     {"poisson", Command::Poisson},
                                     {"sweep", Command::Sweep},
                                     {"audit", Command::Audit}},
                                    "command");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      fail("seed", "expected a nonnegative integer");
    }
  }
  if (j.contains("out")) cfg.out = as_string(j["out"], "out");

  cfg.grid = parse_grid(member(j, "", "grid"), "grid");
  if (j.contains("shape")) cfg.shape = parse_shape(j["shape"], "shape", cfg.grid);
  if (j.contains("shape2")) cfg.shape2 = parse_shape(j["shape2"], "shape2", cfg.grid);
  if (j.contains("modulus")) cfg.omega = parse_modulus(j["modulus"], "modulus");
  if (j.contains("coefficient")) cfg.coeff = parse_coeff(j["coefficient"], "coefficient");

  if (j.contains("cusp")) {
    const json& c = j["cusp"];
    check_object(c, "cusp");
    check_keys(c, "cusp", {"r", "directions", "rule"});
    cfg.cusp_r = as_double(member(c, "cusp", "r"), "cusp.r");
    if (!(cfg.cusp_r > 0.0)) fail("cusp.r", "expected r > 0");
    cfg.cusp.directions = opt_int(c, "cusp", "directions", cfg.cusp.directions);
    if (cfg.cusp.directions < 4) fail("cusp.directions", "expected >= 4");
    if (c.contains("rule"))
      cfg.cusp.rule = parse_name<geom::CuspRule>(
          as_string(c["rule"], "cusp.rule"), "cusp.rule",
          {{"W1", geom::CuspRule::W1}, {"W2", geom::CuspRule::W2}}, "rule");
  }

  if (j.contains("eig")) {
    const json& e = j["eig"];
    check_object(e, "eig");
    check_keys(e, "eig", {"k"});
    cfg.eig_k = as_int(member(e, "eig", "k"), "eig.k");
    if (cfg.eig_k < 1) fail("eig.k", "expected k >= 1");
  }

  if (j.contains("poisson")) {
    const json& p = j["poisson"];
    check_object(p, "poisson");
    check_keys(p, "poisson", {"load"});
    cfg.load = opt_double(p, "poisson", "load", cfg.load);
  }

  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (!s.is_array() || s.empty()) fail("schedule", "expected a nonempty array of numbers");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double eps = as_double(s[i], "schedule[" + std::to_string(i) + "]");
      if (eps < 0.0) fail("schedule[" + std::to_string(i) + "]", "expected eps >= 0");
      if (!cfg.schedule.empty() && eps >= cfg.schedule.back())
        fail("schedule", "entries must be strictly decreasing");
      cfg.schedule.push_back(eps);
    }
  }

  if (j.contains("family")) {
    const json& f = j["family"];
    check_object(f, "family");
    check_keys(f, "family", {"kind", "base_level", "rho", "profile"});
    cfg.family_kind = parse_name<lab::FamilyKind>(
        as_string(member(f, "family", "kind"), "family.kind"), "family.kind",
        {{"erode", lab::FamilyKind::Erode},
         {"dilate", lab::FamilyKind::Dilate},
         {"translate", lab::FamilyKind::Translate},
         {"bump", lab::FamilyKind::BoundaryBump}},
        "family kind");
    cfg.bump_base_level = opt_double(f, "family", "base_level", cfg.bump_base_level);
    cfg.bump_rho = opt_double(f, "family", "rho", cfg.bump_rho);
    if (f.contains("profile")) cfg.bump_profile = parse_modulus(f["profile"], "family.profile");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_object(s, "sweep");
    check_keys(s, "sweep", {"kind", "n_max", "cluster_index", "isolation_radius", "load"});
    cfg.sweep_kind = parse_name<SweepKind>(
        as_string(member(s, "sweep", "kind"), "sweep.kind"), "sweep.kind",
        {{"eigenvalue", SweepKind::Eigenvalue},
         {"resolvent", SweepKind::Resolvent},
         {"angle", SweepKind::Angle}},
        "sweep kind");
    cfg.n_max = opt_int(s, "sweep", "n_max", cfg.n_max);
    if (cfg.n_max < 1) fail("sweep.n_max", "expected >= 1");
    cfg.cluster_index = opt_int(s, "sweep", "cluster_index", cfg.cluster_index);
    if (cfg.cluster_index < 1) fail("sweep.cluster_index", "expected >= 1");
    cfg.isolation_radius = opt_double(s, "sweep", "isolation_radius", cfg.isolation_radius);
    if (cfg.isolation_radius < 0.0) fail("sweep.isolation_radius", "expected >= 0");
    cfg.load = opt_double(s, "sweep", "load", cfg.load);
  }

  if (j.contains("audit")) {
    const json& a = j["audit"];
    check_object(a, "audit");
    check_keys(a, "audit", {"kind", "count", "n"});
    cfg.audit_kind = parse_name<AuditKind>(
        as_string(member(a, "audit", "kind"), "audit.kind"), "audit.kind",
        {{"savare", AuditKind::Savare},
         {"birkhoff", AuditKind::Birkhoff},
         {"dilation_stability", AuditKind::DilationStability},
         {"ball_in_cone", AuditKind::BallInCone},
         {"escape_direction", AuditKind::EscapeDirection},
         {"gap_comparability", AuditKind::GapComparability},
         {"rule_agreement", AuditKind::RuleAgreement}},
        "audit kind");
    cfg.audit_count = opt_int(a, "audit", "count", cfg.audit_count);
    if (cfg.audit_count < 1) fail("audit.count", "expected >= 1");
    cfg.audit_n = opt_int(a, "audit", "n", cfg.audit_n);
    if (cfg.audit_n < 1) fail("audit.n", "expected >= 1");
  }

  if (j.contains("resolution_check"))
    cfg.resolution_check = as_bool(j["resolution_check"], "resolution_check");

  if (j.contains("export")) {
    const json& e = j["export"];
    check_object(e, "export");
    check_keys(e, "export", {"matrices", "field"});
    if (e.contains("matrices")) cfg.export_matrices = as_bool(e["matrices"], "export.matrices");
    if (e.contains("field")) cfg.export_field = as_bool(e["field"], "export.field");
  }

  const auto require_key = [&](const char* key) {
    if (!j.contains(key))
      fail(key, std::string("required for command '") + command_name(cfg.command) + "'");
  };
  switch (cfg.command) {
    case Command::Metrics:
      require_key("shape");
      require_key("shape2");
      break;
    case Command::Cusp:
      require_key("shape");
      require_key("modulus");
      require_key("cusp");
      break;
    case Command::Eig:
    case Command::Poisson:
      require_key("shape");
      break;
    case Command::Sweep:
      require_key("shape");
      require_key("modulus");
      require_key("schedule");
      require_key("family");
      require_key("sweep");
      break;
    case Command::Audit:
      require_key("audit");
      if (cfg.audit_kind == AuditKind::Birkhoff) {
        require_key("shape");
        require_key("shape2");
      }
      if (cfg.audit_kind == AuditKind::Savare && cfg.shape2 && !cfg.shape)
        fail("shape", "required when shape2 is given");
      break;
  }

  json norm = j;
  if (!norm.contains("schema")) norm["schema"] = kSchemaVersion;
  if (!norm.contains("seed")) norm["seed"] = cfg.seed;
  cfg.canonical = norm.dump(2) + "\n";
  char hex[24];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical)));
  cfg.hash = hex;
  return cfg;
}

void apply_overrides(RunConfig& cfg, const std::optional<std::uint64_t>& seed,
                     bool resolution_check) {
  if (!seed && !resolution_check) return;
  json norm = json::parse(cfg.canonical);
  if (seed) {
    cfg.seed = *seed;
    norm["seed"] = *seed;
  }
  if (resolution_check) {
    cfg.resolution_check = true;
    norm["resolution_check"] = true;
  }
  cfg.canonical = norm.dump(2) + "\n";
  char hex[24];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical)));
  cfg.hash = hex;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return parse_run_config(read_file(path));
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    const std::string tag = "ConfigError: ";
    if (msg.rfind(tag, 0) == 0) msg = msg.substr(tag.size());
    throw ConfigError(path.string() + ": " + msg);
  }
}

}  // namespace specstab::io
