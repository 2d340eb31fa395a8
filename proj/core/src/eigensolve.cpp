#include "specstab/spectral/eigensolve.hpp"

#include <cmath>
#include <random>

namespace specstab::spectral {

namespace {

using fem::SparseMat;

void fix_signs(Eigen::MatrixXd& v) {
  for (int c = 0; c < v.cols(); ++c) {
    int arg = 0;
    double best = -1.0;
    for (int r = 0; r < v.rows(); ++r) {
      const double a = std::abs(v(r, c));
      if (a > best) {
        best = a;
        arg = r;
      }
    }
    if (v(arg, c) < 0.0) v.col(c) = -v.col(c);
  }
}

Eigen::VectorXd pair_residuals(const SparseMat& k, const SparseMat& m,
                               const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  Eigen::VectorXd res(values.size());
  for (int i = 0; i < values.size(); ++i) {
    const Eigen::VectorXd kv = k * vectors.col(i);
    const Eigen::VectorXd mv = m * vectors.col(i);
    const double denom = kv.norm() + std::abs(values[i]) * mv.norm();
    res[i] = denom > 0.0 ? (kv - values[i] * mv).norm() / denom : 0.0;
  }
  return res;
}

std::vector<int> cluster_labels(const Eigen::VectorXd& values, double tol) {
  std::vector<int> label(values.size(), 0);
  for (int i = 1; i < values.size(); ++i) {
    const double gap = values[i] - values[i - 1];
    const double scale = std::max(std::abs(values[i]), 1e-300);
    label[i] = label[i - 1] + (gap <= tol * scale ? 0 : 1);
  }
  return label;
}

// Symmetric M-orthonormalization of the block columns.
void orthonormalize(Eigen::MatrixXd& y, const SparseMat& m) {
  Eigen::MatrixXd g = y.transpose() * (m * y);
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev(0) > 1e-14 * std::max(ev(ev.size() - 1), 1e-300)))
    throw NumericsError("eigenvalue iteration block became rank deficient");
  y = y * es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
}

EigenResult dense_path(const fem::DirichletSystem& sys, int k) {
  const Eigen::MatrixXd kd(sys.K());
  const Eigen::MatrixXd md(sys.M());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md,
                                                               Eigen::ComputeEigenvectors |
                                                                   Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericsError("dense eigenvalue solve failed");
  EigenResult out;
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  return out;
}

EigenResult iterative_path(const fem::DirichletSystem& sys, int k, const EigenOptions& opts) {
  const int n = sys.size();
  const int p = std::min(n, std::max(2 * k, k + 8));
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < n; ++r) x(r, c) = gauss(rng);

  Eigen::VectorXd theta_prev = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < opts.max_iterations; ++it) {
    Eigen::MatrixXd y(n, p);
    for (int c = 0; c < p; ++c) y.col(c) = sys.solve_K(sys.M() * x.col(c));
    orthonormalize(y, sys.M());
    Eigen::MatrixXd kr = y.transpose() * (sys.K() * y);
    kr = 0.5 * (kr + kr.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kr);
    if (es.info() != Eigen::Success) throw NumericsError("Rayleigh-Ritz solve failed");
    x = y * es.eigenvectors();
    const Eigen::VectorXd theta = es.eigenvalues();

    bool settled = it > 0;
    for (int i = 0; settled && i < k; ++i)
      settled = std::abs(theta[i] - theta_prev[i]) <= 1e-10 * std::abs(theta[i]);
    theta_prev = theta;
    if (!settled) continue;

    EigenResult out;
    out.values = theta.head(k);
    out.vectors = x.leftCols(k);
    const Eigen::VectorXd res = pair_residuals(sys.K(), sys.M(), out.values, out.vectors);
    if (res.maxCoeff() <= opts.residual_tol) return out;
  }
  throw NumericsError("eigenvalue iteration did not converge");
}

}  // namespace

std::vector<int> EigenResult::cluster_members(int label) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(cluster.size()); ++i)
    if (cluster[i] == label) out.push_back(i);
  return out;
}

EigenResult eigens(const fem::DirichletSystem& sys, int k, const EigenOptions& opts) {
  if (k < 1) throw DomainError("eigenpair count must be >= 1");
  if (k > sys.size()) throw DomainError("requested more eigenpairs than unknowns");

  EigenResult out = sys.size() <= opts.dense_threshold ? dense_path(sys, k)
                                                       : iterative_path(sys, k, opts);
  fix_signs(out.vectors);
  out.residuals = pair_residuals(sys.K(), sys.M(), out.values, out.vectors);
  if (out.residuals.maxCoeff() > opts.residual_tol)
    throw NumericsError("eigenpair residual exceeds tolerance");
  out.cluster = cluster_labels(out.values, opts.cluster_tol);
  return out;
}

}  // namespace specstab::spectral
