#include "specstab/lab/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "specstab/fem/dirichlet.hpp"
#include "specstab/geom/cusp.hpp"
#include "specstab/geom/distance.hpp"
#include "specstab/spectral/subspace.hpp"

namespace specstab::lab {

using fem::AmbientSystem;
using fem::DirichletSystem;
using geom::GridGeometry;
using geom::RasterSet;

namespace {

void fill_distances(SweepRecord& rec, const RasterSet& base, const RasterSet& mem) {
  if (mem.mask() == base.mask()) return;  // identical member: all distances stay 0
  const geom::HausdorffDistances d = geom::hausdorff_distances(base, mem);
  rec.d_h = d.d_H;
  rec.d_open = d.d_open;
  rec.d_hp = d.d_HP;
  rec.d_hs = d.d_HS;
  rec.e_sym_bd = geom::gap(base.symmetric_difference(mem), base.boundary());
}

void ratio_stats(const std::vector<SweepRecord>& records, double& rmax, double& rmedian) {
  std::vector<double> r;
  for (const SweepRecord& rec : records)
    if (rec.bound > 0.0 && !rec.flagged) r.push_back(rec.ratio);
  rmax = 0.0;
  rmedian = 0.0;
  if (r.empty()) return;
  std::sort(r.begin(), r.end());
  rmax = r.back();
  const std::size_t m = r.size() / 2;
  rmedian = r.size() % 2 ? r[m] : 0.5 * (r[m - 1] + r[m]);
}

FitResult guarded_fit(const std::vector<SweepRecord>& records) {
  std::vector<std::array<double, 2>> pts;
  for (const SweepRecord& rec : records)
    if (!rec.flagged && rec.bound > 0.0 && rec.value > 0.0) pts.push_back({rec.bound, rec.value});
  if (pts.size() < 3) return {};
  return fit_slope(pts);
}

void validate_base_cusp(const PerturbationFamily& fam) {
  geom::CuspOptions copts;
  const geom::CuspReport rep =
      geom::cusp_check(fam.base(), fam.spec().omega, fam.spec().cusp_r, copts);
  if (!rep.pass) throw DomainError("family base fails the cusp check for its declared class");
}

spectral::EigenOptions eig_options(const SweepOptions& opts) {
  spectral::EigenOptions eopts = opts.eig;
  eopts.seed = opts.seed;
  return eopts;
}

std::vector<SweepRecord> measure_eigen(const PerturbationFamily& fam,
                                       const fem::CoefficientField& coeff,
                                       const GridGeometry& grid, const SweepOptions& opts) {
  const AmbientSystem amb(grid, coeff);
  const RasterSet base = fam.member_on(0.0, grid);
  const DirichletSystem sys1 = restrict_to(amb, base);
  const spectral::EigenResult eig1 = spectral::eigens(sys1, opts.n_max, eig_options(opts));
  const geom::Modulus& omega = fam.spec().omega;

  std::vector<SweepRecord> records;
  for (double eps : fam.spec().schedule) {
    SweepRecord rec;
    rec.eps = eps;
    const RasterSet mem = fam.member_on(eps, grid);
    fill_distances(rec, base, mem);
    rec.lambda_base.assign(eig1.values.data(), eig1.values.data() + eig1.values.size());
    if (mem.mask() == base.mask()) {
      rec.lambda_pert = rec.lambda_base;
    } else {
      const DirichletSystem sys2 = restrict_to(amb, mem);
      const spectral::EigenResult eig2 = spectral::eigens(sys2, opts.n_max, eig_options(opts));
      rec.lambda_pert.assign(eig2.values.data(), eig2.values.data() + eig2.values.size());
    }
    for (std::size_t i = 0; i < rec.lambda_base.size(); ++i)
      rec.dlambda.push_back(std::abs(rec.lambda_base[i] - rec.lambda_pert[i]));
    rec.value = rec.dlambda[0];
    rec.eps_meas = rec.d_hp;
    rec.bound = omega(rec.eps_meas) + rec.eps_meas;
    rec.ratio = rec.bound > 0.0 ? rec.value / rec.bound : 0.0;
    rec.bound_dhs = omega(rec.d_hs) + rec.d_hs;
    rec.ratio_dhs = rec.bound_dhs > 0.0 ? rec.value / rec.bound_dhs : 0.0;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SweepRecord> measure_resolvent(const PerturbationFamily& fam,
                                           const fem::CoefficientField& coeff,
                                           const std::function<double(geom::Point)>& f,
                                           const GridGeometry& grid, const SweepOptions& opts) {
  (void)opts;
  const AmbientSystem amb(grid, coeff);
  const double p = fem::friedrichs_constant(amb.metric_companion());
  Eigen::VectorXd fv(amb.size());
  for (int i = 0; i < amb.size(); ++i) fv[i] = f(amb.node_point(i));
  const double f_lp = amb.norm_L2(fv) / std::sqrt(p);
  const double f_vp = amb.dual_norm_Vprime(fv);

  const RasterSet base = fam.member_on(0.0, grid);
  const DirichletSystem sys1 = restrict_to(amb, base);
  const fem::FieldVector u1 = fem::solve_dirichlet(sys1, fv);
  const geom::Modulus& omega = fam.spec().omega;

  std::vector<SweepRecord> records;
  for (double eps : fam.spec().schedule) {
    SweepRecord rec;
    rec.eps = eps;
    const RasterSet mem = fam.member_on(eps, grid);
    fill_distances(rec, base, mem);
    double defect2 = 0.0;
    if (!(mem.mask() == base.mask())) {
      const DirichletSystem sys2 = restrict_to(amb, mem);
      const fem::FieldVector u2 = fem::solve_dirichlet(sys2, fv);
      const double d = amb.norm_V(u1.ambient - u2.ambient);
      defect2 = d * d;
    }
    rec.value = defect2;
    rec.eps_meas = rec.e_sym_bd;
    rec.bound = omega.phi(rec.eps_meas) == 0.0 ? 0.0 : omega.phi(rec.eps_meas) * f_lp * f_vp;
    rec.ratio = rec.bound > 0.0 ? rec.value / rec.bound : 0.0;
    rec.bound_dhs = omega.phi(rec.d_hs) * f_lp * f_vp;
    rec.ratio_dhs = rec.bound_dhs > 0.0 ? rec.value / rec.bound_dhs : 0.0;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SweepRecord> measure_angle(const PerturbationFamily& fam,
                                       const fem::CoefficientField& coeff,
                                       const GridGeometry& grid, const SweepOptions& opts) {
  const AmbientSystem amb(grid, coeff);
  const RasterSet base = fam.member_on(0.0, grid);
  const DirichletSystem sys1 = restrict_to(amb, base);
  const int k_req = opts.cluster_index;
  if (k_req < 1) throw DomainError("cluster index must be >= 1");

  int kk = std::min(sys1.size(), std::max(2 * k_req + 2, 8));
  spectral::EigenResult eig1 = spectral::eigens(sys1, kk, eig_options(opts));
  while (eig1.distinct_clusters() <= k_req && kk < sys1.size()) {
    kk = std::min(2 * kk, sys1.size());
    eig1 = spectral::eigens(sys1, kk, eig_options(opts));
  }
  if (eig1.distinct_clusters() <= k_req)
    throw DomainError("could not resolve a cluster beyond the requested one");

  const std::vector<int> members = eig1.cluster_members(k_req - 1);
  const double nu_k = 1.0 / eig1.values[members.front()];
  double gap = std::numeric_limits<double>::infinity();
  for (int j = 0; j < eig1.values.size(); ++j)
    if (eig1.cluster[j] != k_req - 1)
      gap = std::min(gap, std::abs(1.0 / eig1.values[j] - nu_k));
  const double r = opts.isolation_radius > 0.0 ? opts.isolation_radius : 0.4 * gap;
  for (int j = 0; j < eig1.values.size(); ++j)
    if (eig1.cluster[j] != k_req - 1 && std::abs(1.0 / eig1.values[j] - nu_k) <= 2.0 * r)
      throw GapError("isolation disk of twice the radius touches another cluster");

  Eigen::MatrixXd gen1(amb.size(), members.size());
  for (std::size_t c = 0; c < members.size(); ++c)
    gen1.col(c) = sys1.extend(eig1.vectors.col(members[c]));
  const spectral::SubspaceHandle e1 = spectral::make_subspace(amb, gen1);
  const geom::Modulus& omega = fam.spec().omega;

  std::vector<SweepRecord> records;
  for (double eps : fam.spec().schedule) {
    SweepRecord rec;
    rec.eps = eps;
    const RasterSet mem = fam.member_on(eps, grid);
    fill_distances(rec, base, mem);
    const DirichletSystem sys2 = restrict_to(amb, mem);

    int kk2 = std::min(sys2.size(), kk);
    spectral::EigenResult eig2 = spectral::eigens(sys2, kk2, eig_options(opts));
    while (1.0 / eig2.values[kk2 - 1] >= nu_k - r && kk2 < sys2.size()) {
      kk2 = std::min(2 * kk2, sys2.size());
      eig2 = spectral::eigens(sys2, kk2, eig_options(opts));
    }
    std::vector<int> captured;
    for (int j = 0; j < eig2.values.size(); ++j)
      if (std::abs(1.0 / eig2.values[j] - nu_k) < r) captured.push_back(j);

    double angle = 1.0;
    if (!captured.empty()) {
      Eigen::MatrixXd gen2(amb.size(), captured.size());
      for (std::size_t c = 0; c < captured.size(); ++c)
        gen2.col(c) = sys2.extend(eig2.vectors.col(captured[c]));
      angle = spectral::generalized_angle(amb, e1, spectral::make_subspace(amb, gen2));
    }
    rec.lambda_base.assign(eig1.values.data(), eig1.values.data() + eig1.values.size());
    rec.lambda_pert.assign(eig2.values.data(), eig2.values.data() + eig2.values.size());
    rec.value = angle;
    rec.eps_meas = rec.e_sym_bd;
    rec.bound = omega.phi(rec.eps_meas);
    rec.ratio = rec.bound > 0.0 ? angle / std::sqrt(rec.bound) : 0.0;
    rec.bound_dhs = omega.phi(rec.d_hs);
    rec.ratio_dhs = rec.bound_dhs > 0.0 ? angle / std::sqrt(rec.bound_dhs) : 0.0;
    records.push_back(std::move(rec));
  }
  return records;
}

GridGeometry refined_grid(const GridGeometry& g) { return {g.origin, g.side, 2 * g.n}; }

}  // namespace

FitResult fit_slope(const std::vector<std::array<double, 2>>& pts) {
  std::vector<std::array<double, 2>> usable;
  for (const auto& p : pts)
    if (p[0] > 0.0 && p[1] > 0.0) usable.push_back(p);
  if (usable.size() < 3) throw DomainError("log-log fit needs at least three positive points");
  double sx = 0, sy = 0;
  for (const auto& p : usable) {
    sx += std::log(p[0]);
    sy += std::log(p[1]);
  }
  const double mx = sx / usable.size(), my = sy / usable.size();
  double sxx = 0, sxy = 0;
  for (const auto& p : usable) {
    const double dx = std::log(p[0]) - mx, dy = std::log(p[1]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("log-log fit abscissae are degenerate");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(usable.size());
  double rss = 0;
  for (const auto& p : usable) {
    const double e = std::log(p[1]) - (fit.intercept + fit.slope * std::log(p[0]));
    rss += e * e;
  }
  fit.rms = std::sqrt(rss / usable.size());
  return fit;
}

SweepResult eigen_stability_sweep(const PerturbationFamily& fam,
                                  const fem::CoefficientField& coeff, const SweepOptions& opts) {
  if (opts.validate_cusp) validate_base_cusp(fam);
  SweepResult out;
  out.seed = opts.seed;
  out.records = measure_eigen(fam, coeff, fam.grid(), opts);
  if (opts.resolution_check) {
    out.refined = measure_eigen(fam, coeff, refined_grid(fam.grid()), opts);
    int unstable = 0, positive = 0;
    for (std::size_t i = 0; i < out.records.size(); ++i) {
      if (out.records[i].eps == 0.0) continue;
      ++positive;
      const double a = out.records[i].value, b = out.refined[i].value;
      if (std::abs(a - b) > 0.10 * std::max(std::abs(b), 1e-14)) {
        out.records[i].flagged = true;
        ++unstable;
      }
    }
    out.flagged = unstable;
    if (positive > 0 && unstable == positive)
      throw ResolutionError("eigenvalue shifts are unstable under grid refinement");
    ratio_stats(out.refined, out.ratio_max_refined, out.ratio_median_refined);
  }
  out.fit = guarded_fit(out.records);
  ratio_stats(out.records, out.ratio_max, out.ratio_median);
  return out;
}

SweepResult resolvent_sweep(const PerturbationFamily& fam, const fem::CoefficientField& coeff,
                            const std::function<double(geom::Point)>& f,
                            const SweepOptions& opts) {
  if (opts.validate_cusp) validate_base_cusp(fam);
  SweepResult out;
  out.seed = opts.seed;
  out.records = measure_resolvent(fam, coeff, f, fam.grid(), opts);
  if (opts.resolution_check) {
    out.refined = measure_resolvent(fam, coeff, f, refined_grid(fam.grid()), opts);
    ratio_stats(out.refined, out.ratio_max_refined, out.ratio_median_refined);
  }
  out.fit = guarded_fit(out.records);
  ratio_stats(out.records, out.ratio_max, out.ratio_median);
  return out;
}

SweepResult angle_sweep(const PerturbationFamily& fam, const fem::CoefficientField& coeff,
                        const SweepOptions& opts) {
  if (opts.validate_cusp) validate_base_cusp(fam);
  SweepResult out;
  out.seed = opts.seed;
  out.records = measure_angle(fam, coeff, fam.grid(), opts);
  if (opts.resolution_check) {
    out.refined = measure_angle(fam, coeff, refined_grid(fam.grid()), opts);
    ratio_stats(out.refined, out.ratio_max_refined, out.ratio_median_refined);
  }
  out.fit = guarded_fit(out.records);
  ratio_stats(out.records, out.ratio_max, out.ratio_median);
  return out;
}

}  // namespace specstab::lab
