#include "specstab/io/run.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <json.hpp>

#include "specstab/errors.hpp"
#include "specstab/fem/assembly.hpp"
#include "specstab/fem/dirichlet.hpp"
#include "specstab/geom/distance.hpp"
#include "specstab/io/csv.hpp"
#include "specstab/lab/sweep.hpp"
#include "specstab/spectral/eigensolve.hpp"

namespace specstab::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommandOutput {
  CsvTable results;
  json summary;
  // extra artifact name -> content, written alongside results.csv
  std::vector<std::pair<std::string, std::string>> extras;
};

std::string coo_csv(const fem::SparseMat& A) {
  CsvTable t;
  t.header = {"row", "col", "value"};
  for (int k = 0; k < A.outerSize(); ++k)
    for (fem::SparseMat::InnerIterator it(A, k); it; ++it)
      t.rows.push_back({std::to_string(it.row()), std::to_string(it.col()),
                        format_full(it.value())});
  return render_csv(t);
}

CommandOutput run_metrics(const RunConfig& cfg) {
  const auto X = geom::rasterize(*cfg.shape, cfg.grid);
  const auto Y = geom::rasterize(*cfg.shape2, cfg.grid);
  const auto d = geom::hausdorff_distances(X, Y);
  const double g12 = geom::gap(X, Y), g21 = geom::gap(Y, X);
  const double c12 = geom::co_gap(X, Y), c21 = geom::co_gap(Y, X);

  CommandOutput out;
  out.results.header = {"d_H", "d_open", "d_HP", "d_HS", "gap_12", "gap_21", "cogap_12",
                        "cogap_21"};
  out.results.rows.push_back({format_full(d.d_H), format_full(d.d_open), format_full(d.d_HP),
                              format_full(d.d_HS), format_full(g12), format_full(g21),
                              format_full(c12), format_full(c21)});
  out.summary["d_H"] = d.d_H;
  out.summary["d_open"] = d.d_open;
  out.summary["d_HP"] = d.d_HP;
  out.summary["d_HS"] = d.d_HS;
  out.summary["cells"] = {{"shape", X.count()}, {"shape2", Y.count()}};
  return out;
}

CommandOutput run_cusp(const RunConfig& cfg) {
  const auto X = geom::rasterize(*cfg.shape, cfg.grid);
  const auto rep = geom::cusp_check(X, cfg.omega, cfg.cusp_r, cfg.cusp);

  CommandOutput out;
  out.results.header = {"x", "y", "found", "xi_x", "xi_y", "margin"};
  int failing = 0;
  for (const auto& rec : rep.records) {
    if (!rec.found) ++failing;
    out.results.rows.push_back({format_full(rec.x.x), format_full(rec.x.y),
                                rec.found ? "1" : "0", format_full(rec.xi.x),
                                format_full(rec.xi.y), format_full(rec.margin)});
  }
  out.summary["pass"] = rep.pass;
  out.summary["r"] = rep.r;
  out.summary["directions"] = rep.directions;
  out.summary["rule"] = rep.rule == geom::CuspRule::W1 ? "W1" : "W2";
  out.summary["modulus"] = rep.modulus;
  out.summary["boundary_cells"] = rep.records.size();
  out.summary["failing_cells"] = failing;
  return out;
}

CommandOutput run_eig(const RunConfig& cfg) {
  const fem::AmbientSystem amb(cfg.grid, cfg.coeff);
  const fem::DirichletSystem dom(amb, geom::rasterize(*cfg.shape, cfg.grid));
  spectral::EigenOptions eo;
  eo.seed = cfg.seed;
  const auto e = spectral::eigens(dom, cfg.eig_k, eo);

  CommandOutput out;
  out.results.header = {"n", "lambda", "residual", "cluster"};
  for (int i = 0; i < e.values.size(); ++i)
    out.results.rows.push_back({std::to_string(i + 1), format_full(e.values(i)),
                                format_full(e.residuals(i)), std::to_string(e.cluster[i])});
  out.summary["k"] = cfg.eig_k;
  out.summary["size"] = dom.size();
  out.summary["lambda"] = std::vector<double>(e.values.data(), e.values.data() + e.values.size());
  out.summary["residual_max"] = e.residuals.size() ? e.residuals.maxCoeff() : 0.0;
  out.summary["clusters"] = e.distinct_clusters();
  if (cfg.export_matrices) {
    out.extras.emplace_back("K.coo.csv", coo_csv(dom.K()));
    out.extras.emplace_back("M.coo.csv", coo_csv(dom.M()));
  }
  return out;
}

CommandOutput run_poisson(const RunConfig& cfg) {
  const fem::AmbientSystem amb(cfg.grid, cfg.coeff);
  const fem::DirichletSystem dom(amb, geom::rasterize(*cfg.shape, cfg.grid));
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(amb.size(), cfg.load);
  const auto fv = fem::solve_dirichlet(dom, f);

  CommandOutput out;
  out.results.header = {"u_max", "u_min", "norm_V", "norm_L2"};
  const double umax = fv.ambient.size() ? fv.ambient.maxCoeff() : 0.0;
  const double umin = fv.ambient.size() ? fv.ambient.minCoeff() : 0.0;
  const double nv = dom.norm_V(fv.interior), nl = dom.norm_L2(fv.interior);
  out.results.rows.push_back(
      {format_full(umax), format_full(umin), format_full(nv), format_full(nl)});
  out.summary["u_max"] = umax;
  out.summary["u_min"] = umin;
  out.summary["norm_V"] = nv;
  out.summary["norm_L2"] = nl;
  out.summary["size"] = dom.size();
  if (cfg.export_matrices) {
    out.extras.emplace_back("K.coo.csv", coo_csv(dom.K()));
    out.extras.emplace_back("M.coo.csv", coo_csv(dom.M()));
  }
  if (cfg.export_field) {
    CsvTable t;
    t.header = {"x", "y", "u"};
    for (int idx = 0; idx < amb.size(); ++idx) {
      const auto p = amb.node_point(idx);
      t.rows.push_back({format_full(p.x), format_full(p.y), format_full(fv.ambient(idx))});
    }
    out.extras.emplace_back("field.csv", render_csv(t));
  }
  return out;
}

void sweep_rows(CsvTable& t, const std::vector<lab::SweepRecord>& records) {
  std::size_t mb = 0, md = 0;
  for (const auto& r : records) {
    mb = std::max(mb, r.lambda_base.size());
    md = std::max(md, r.dlambda.size());
  }
  t.header = {"eps",      "eps_meas", "d_H",   "d_open", "d_HP",      "d_HS",     "e_sym_bd",
              "value",    "bound",    "ratio", "bound_dhs", "ratio_dhs", "flagged"};
  for (std::size_t i = 0; i < mb; ++i) {
    t.header.push_back("lambda_base_" + std::to_string(i + 1));
    t.header.push_back("lambda_pert_" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < md; ++i) t.header.push_back("dlambda_" + std::to_string(i + 1));
  for (const auto& r : records) {
    std::vector<std::string> row = {
        format_full(r.eps),   format_full(r.eps_meas),  format_full(r.d_h),
        format_full(r.d_open), format_full(r.d_hp),     format_full(r.d_hs),
        format_full(r.e_sym_bd), format_full(r.value),  format_full(r.bound),
        format_full(r.ratio), format_full(r.bound_dhs), format_full(r.ratio_dhs),
        r.flagged ? "1" : "0"};
    for (std::size_t i = 0; i < mb; ++i) {
      row.push_back(i < r.lambda_base.size() ? format_full(r.lambda_base[i]) : "");
      row.push_back(i < r.lambda_pert.size() ? format_full(r.lambda_pert[i]) : "");
    }
    for (std::size_t i = 0; i < md; ++i)
      row.push_back(i < r.dlambda.size() ? format_full(r.dlambda[i]) : "");
    t.rows.push_back(std::move(row));
  }
}

CommandOutput run_sweep(const RunConfig& cfg) {
  const lab::PerturbationFamily fam(cfg.family_spec(), cfg.grid);
  lab::SweepOptions so;
  so.seed = cfg.seed;
  so.resolution_check = cfg.resolution_check;
  so.n_max = cfg.n_max;
  so.cluster_index = cfg.cluster_index;
  so.isolation_radius = cfg.isolation_radius;
  so.eig.seed = cfg.seed;

  lab::SweepResult res;
  switch (cfg.sweep_kind) {
    case SweepKind::Eigenvalue:
      res = lab::eigen_stability_sweep(fam, cfg.coeff, so);
      break;
    case SweepKind::Resolvent: {
      const double c = cfg.load;
      res = lab::resolvent_sweep(fam, cfg.coeff, [c](geom::Point) { return c; }, so);
      break;
    }
    case SweepKind::Angle:
      res = lab::angle_sweep(fam, cfg.coeff, so);
      break;
  }

  CommandOutput out;
  sweep_rows(out.results, res.records);

  CsvTable plot;
  plot.header = {"x", "y"};
  for (const auto& r : res.records)
    if (!r.flagged && r.bound > 0.0 && r.value > 0.0)
      plot.rows.push_back({format_full(r.bound), format_full(r.value)});
  out.extras.emplace_back("plot.csv", render_csv(plot));
  if (!res.refined.empty()) {
    CsvTable refined;
    sweep_rows(refined, res.refined);
    out.extras.emplace_back("refined.csv", render_csv(refined));
  }

  bool has_monotone = cfg.family_kind == lab::FamilyKind::Erode;
  bool monotone = true;
  for (const auto& r : res.records) {
    if (r.lambda_base.empty()) has_monotone = false;
    for (std::size_t i = 0; i < r.lambda_base.size() && i < r.lambda_pert.size(); ++i)
      monotone = monotone &&
                 r.lambda_pert[i] + 1e-8 * (1.0 + std::abs(r.lambda_base[i])) >= r.lambda_base[i];
  }

  out.summary["kind"] = sweep_kind_name(cfg.sweep_kind);
  out.summary["fit"] = {{"slope", res.fit.slope},
                        {"intercept", res.fit.intercept},
                        {"rms", res.fit.rms},
                        {"points", res.fit.points}};
  out.summary["constants"] = {{"ratio_max", res.ratio_max},
                              {"ratio_median", res.ratio_median},
                              {"ratio_max_refined", res.ratio_max_refined},
                              {"ratio_median_refined", res.ratio_median_refined}};
  json pass;
  pass["resolution_clear"] = res.flagged == 0;
  if (has_monotone)
    pass["monotone_erosion"] = monotone;
  else
    pass["monotone_erosion"] = nullptr;
  out.summary["pass"] = pass;
  out.summary["flagged"] = res.flagged;
  out.summary["records"] = res.records.size();
  return out;
}

lab::GeometrySuite to_suite(AuditKind k) {
  switch (k) {
    case AuditKind::DilationStability: return lab::GeometrySuite::DilationStability;
    case AuditKind::BallInCone: return lab::GeometrySuite::BallInCone;
    case AuditKind::EscapeDirection: return lab::GeometrySuite::EscapeDirection;
    case AuditKind::GapComparability: return lab::GeometrySuite::GapComparability;
    default: return lab::GeometrySuite::RuleAgreement;
  }
}

CommandOutput run_audit(const RunConfig& cfg) {
  lab::AuditReport rep;
  json numbers;
  switch (cfg.audit_kind) {
    case AuditKind::Savare:
      if (cfg.shape2) {
        const auto o1 = geom::rasterize(*cfg.shape, cfg.grid);
        const auto o2 = geom::rasterize(*cfg.shape2, cfg.grid);
        const fem::AmbientSystem amb(cfg.grid, cfg.coeff);
        const Eigen::VectorXd f = Eigen::VectorXd::Constant(amb.size(), cfg.load);
        rep = lab::audit_savare(o1, o2, cfg.coeff, f);
      } else {
        rep = lab::savare_suite(cfg.audit_count, cfg.seed, cfg.grid.n);
      }
      break;
    case AuditKind::Birkhoff: {
      const auto o1 = geom::rasterize(*cfg.shape, cfg.grid);
      const auto o2 = geom::rasterize(*cfg.shape2, cfg.grid);
      lab::BirkhoffNumbers nums;
      rep = lab::audit_birkhoff(o1, o2, cfg.coeff, cfg.audit_n, &nums);
      numbers = {{"A_n", nums.An},
                 {"B_n", nums.Bn},
                 {"p", nums.p},
                 {"correction", nums.correction},
                 {"lambda_1", nums.lam1},
                 {"lambda_2", nums.lam2}};
      break;
    }
    default: {
      lab::GeometryAuditOptions go;
      go.grid_n = cfg.grid.n;
      go.box_side = cfg.grid.side;
      go.directions = cfg.cusp.directions;
      rep = lab::audit_geometry(to_suite(cfg.audit_kind), cfg.audit_count, cfg.seed, go);
      break;
    }
  }

  CommandOutput out;
  out.results.header = {"check", "lhs", "rhs", "slack", "pass"};
  for (const auto& c : rep.details)
    out.results.rows.push_back({c.what, format_full(c.lhs), format_full(c.rhs),
                                format_full(c.slack), c.pass ? "1" : "0"});
  out.summary["kind"] = audit_kind_name(cfg.audit_kind);
  out.summary["name"] = rep.name;
  out.summary["instances"] = rep.instances;
  out.summary["rejected"] = rep.rejected;
  out.summary["banded"] = rep.banded;
  out.summary["failures"] = rep.failures;
  out.summary["worst_slack"] = rep.worst_slack;
  out.summary["tolerance"] = rep.tolerance;
  out.summary["pass"] = rep.pass;
  if (!numbers.is_null()) out.summary["numbers"] = numbers;
  return out;
}

json manifest_json(const RunConfig& cfg) {
  json man;
  man["schema"] = kSchemaVersion;
  man["tool"] = "specstab";
  man["version"] = kToolVersion;
  man["command"] = command_name(cfg.command);
  man["seed"] = cfg.seed;
  man["grid"] = {{"origin", {cfg.grid.origin.x, cfg.grid.origin.y}},
                 {"side", cfg.grid.side},
                 {"n", cfg.grid.n},
                 {"h", cfg.grid.h()}};
  man["config_hash"] = cfg.hash;
  man["config"] = json::parse(cfg.canonical);
  return man;
}

}  // namespace

void run(const RunConfig& cfg, const fs::path& out_dir) {
  CommandOutput out;
  switch (cfg.command) {
    case Command::Metrics: out = run_metrics(cfg); break;
    case Command::Cusp: out = run_cusp(cfg); break;
    case Command::Eig: out = run_eig(cfg); break;
    case Command::Poisson: out = run_poisson(cfg); break;
    case Command::Sweep: out = run_sweep(cfg); break;
    case Command::Audit: out = run_audit(cfg); break;
  }

  json summary;
  summary["command"] = command_name(cfg.command);
  summary["seed"] = cfg.seed;
  for (const auto& item : out.summary.items()) summary[item.key()] = item.value();

  write_file_atomic(out_dir / "results.csv", render_csv(out.results));
  write_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  write_file_atomic(out_dir / "manifest.json", manifest_json(cfg).dump(2) + "\n");
  for (const auto& [name, content] : out.extras) write_file_atomic(out_dir / name, content);
}

void report(const std::vector<fs::path>& run_dirs, const fs::path& out_csv,
            bool allow_mixed_grids) {
  if (run_dirs.empty()) throw ConfigError("report: no run directories given");

  struct RunData {
    json manifest;
    CsvTable results;
    double h = 0.0;
  };
  std::vector<RunData> runs;
  for (const auto& dir : run_dirs) {
    RunData rd;
    try {
      rd.manifest = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::parse_error& e) {
      throw ConfigError((dir / "manifest.json").string() + ": " + e.what());
    }
    if (!rd.manifest.is_object() || !rd.manifest.contains("schema") ||
        !rd.manifest.contains("command") || !rd.manifest.contains("grid"))
      throw ConfigError((dir / "manifest.json").string() + ": not a run manifest");
    if (rd.manifest["schema"] != kSchemaVersion)
      throw ConfigError((dir / "manifest.json").string() + ": unsupported schema version");
    rd.results = parse_csv(read_file(dir / "results.csv"));
    rd.h = rd.manifest["grid"].value("h", 0.0);
    runs.push_back(std::move(rd));
  }

  const json& first = runs.front().manifest;
  bool mixed = false;
  for (const auto& rd : runs) {
    if (rd.manifest["command"] != first["command"])
      throw ConfigError("report: disjoint commands " + first["command"].get<std::string>() +
                        " vs " + rd.manifest["command"].get<std::string>());
    if (rd.manifest["grid"] != first["grid"]) mixed = true;
    if (rd.results.header != runs.front().results.header)
      throw ConfigError("report: result columns differ between runs");
  }
  if (mixed && !allow_mixed_grids)
    throw ConfigError("report: mixed grids; pass --allow-mixed-grids to join them");

  CsvTable merged;
  merged.header = runs.front().results.header;
  if (mixed) merged.header.insert(merged.header.begin(), "h");
  for (const auto& rd : runs)
    for (const auto& row : rd.results.rows) {
      std::vector<std::string> r = row;
      if (mixed) r.insert(r.begin(), format_full(rd.h));
      merged.rows.push_back(std::move(r));
    }
  write_file_atomic(out_csv, render_csv(merged));
}

}  // namespace specstab::io
