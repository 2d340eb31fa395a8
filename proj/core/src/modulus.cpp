#include "specstab/geom/modulus.hpp"

#include <algorithm>
#include <cmath>

namespace specstab::geom {

namespace {
void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}
}  // namespace

Modulus Modulus::zero(double offset, double r_max) {
  require(offset >= 0.0 && r_max > 0.0, "zero modulus needs offset >= 0, r_max > 0");
  Modulus m;
  m.kind_ = ModulusKind::Zero;
  m.offset_ = offset;
  m.r_max_ = r_max;
  return m;
}

Modulus Modulus::lipschitz(double L, double offset, double r_max) {
  require(L >= 0.0 && offset >= 0.0 && r_max > 0.0, "lipschitz modulus needs L, offset >= 0");
  Modulus m;
  m.kind_ = ModulusKind::Lipschitz;
  m.L_ = L;
  m.offset_ = offset;
  m.r_max_ = r_max;
  return m;
}

Modulus Modulus::hoelder(double L, double alpha, double offset, double r_max) {
  require(L >= 0.0 && alpha > 0.0 && alpha <= 1.0 && offset >= 0.0 && r_max > 0.0,
          "hoelder modulus needs L >= 0, alpha in (0,1], offset >= 0");
  Modulus m;
  m.kind_ = ModulusKind::Hoelder;
  m.L_ = L;
  m.alpha_ = alpha;
  m.offset_ = offset;
  m.r_max_ = r_max;
  return m;
}

Modulus Modulus::tabulated(std::vector<std::pair<double, double>> samples) {
  require(samples.size() >= 2, "tabulated modulus needs at least two samples");
  require(samples.front().first == 0.0, "tabulated modulus must start at r = 0");
  for (size_t i = 0; i < samples.size(); ++i) {
    require(samples[i].second >= 0.0, "tabulated modulus values must be >= 0");
    if (i > 0) {
      require(samples[i].first > samples[i - 1].first, "tabulated abscissae must increase");
      require(samples[i].second >= samples[i - 1].second, "tabulated modulus must be nondecreasing");
    }
  }
  Modulus m;
  m.kind_ = ModulusKind::Tabulated;
  m.offset_ = samples.front().second;
  m.r_max_ = samples.back().first;
  m.table_ = std::move(samples);
  // Sampled semi-additivity: w(a+b) <= w(a) + w(b) on the table abscissae.
  for (size_t i = 0; i < m.table_.size(); ++i)
    for (size_t j = i; j < m.table_.size(); ++j) {
      double a = m.table_[i].first, b = m.table_[j].first;
      if (a + b > m.r_max_) continue;
      double lhs = m(a + b);
      double rhs = m.table_[i].second + m.table_[j].second;
      if (lhs > rhs + 1e-12 * (1.0 + rhs))
        throw DomainError("tabulated modulus violates semi-additivity");
    }
  return m;
}

double Modulus::operator()(double r) const {
  if (!(r >= 0.0) || r > r_max_ * (1.0 + 1e-12))
    throw DomainError("modulus argument outside [0, r_max]");
  switch (kind_) {
    case ModulusKind::Zero:
      return offset_;
    case ModulusKind::Lipschitz:
      return offset_ + L_ * r;
    case ModulusKind::Hoelder:
      return offset_ + L_ * std::pow(r, alpha_);
    case ModulusKind::Tabulated: {
      auto it = std::lower_bound(table_.begin(), table_.end(), r,
                                 [](const auto& s, double v) { return s.first < v; });
      if (it == table_.begin()) return it->second;
      if (it == table_.end()) return table_.back().second;
      auto lo = *(it - 1);
      auto hi = *it;
      double t = (r - lo.first) / (hi.first - lo.first);
      return lo.second + t * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double Modulus::psi(double r) const {
  double w = (*this)(r);
  return std::sqrt(r * r + w * w);
}

double Modulus::phi(double r) const { return r + (*this)(r); }

double Modulus::invert(double (Modulus::*f)(double) const, double target) const {
  double lo = 0.0, hi = r_max_;
  double f0 = (this->*f)(0.0);
  if (target < f0 - 1e-15 * (1.0 + std::abs(f0)))
    throw DomainError("inverse target below the value at r = 0");
  if (target <= f0) return 0.0;
  if ((this->*f)(hi) < target) throw DomainError("inverse target above the value at r_max");
  double tol = 1e-12 * r_max_;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if ((this->*f)(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double Modulus::psi_inv(double s) const { return invert(&Modulus::psi, s); }
double Modulus::phi_inv(double s) const { return invert(&Modulus::phi, s); }

std::string Modulus::describe() const {
  switch (kind_) {
    case ModulusKind::Zero:
      return "zero(offset=" + std::to_string(offset_) + ")";
    case ModulusKind::Lipschitz:
      return "lipschitz(L=" + std::to_string(L_) + ",offset=" + std::to_string(offset_) + ")";
    case ModulusKind::Hoelder:
      return "hoelder(L=" + std::to_string(L_) + ",alpha=" + std::to_string(alpha_) +
             ",offset=" + std::to_string(offset_) + ")";
    case ModulusKind::Tabulated:
      return "tabulated(" + std::to_string(table_.size()) + " samples)";
  }
  return "";
}

}  // namespace specstab::geom
