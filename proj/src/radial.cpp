#include "hitchin/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hitchin {

RadialMesh RadialMesh::graded(int n, double alpha) {
  if (n < 16) throw std::invalid_argument("radial mesh needs at least 16 intervals");
  if (!(alpha > 0)) throw std::invalid_argument("grading parameter must be positive");
  RadialMesh m;
  m.alpha = alpha;
  m.r.resize(n + 1);
  const double denom = std::expm1(alpha);
  for (int i = 0; i <= n; ++i) m.r[i] = std::expm1(alpha * i / n) / denom;
  m.r.front() = 0.0;
  m.r.back() = 1.0;

  m.flux.resize(n);
  for (int i = 0; i < n; ++i) m.flux[i] = 0.5 * (m.r[i] + m.r[i + 1]) / (m.r[i + 1] - m.r[i]);

  m.weight.resize(n + 1);
  m.sample = m.r;
  for (int i = 0; i <= n; ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (m.r[i - 1] + m.r[i]);
    const double hi = i == n ? 1.0 : 0.5 * (m.r[i] + m.r[i + 1]);
    m.weight[i] = 0.5 * (hi * hi - lo * lo);
  }
  m.sample[0] = 2.0 / 3.0 * 0.5 * m.r[1];
  return m;
}

BandedSym::BandedSym(int n, int bandwidth) : n_(n), bw_(bandwidth), band_(Eigen::MatrixXd::Zero(bandwidth + 1, n)) {}

double& BandedSym::at(int i, int j) {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) throw std::out_of_range("entry outside the band");
  return band_(i - j, i);
}

double BandedSym::at(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return band_(i - j, i);
}

Eigen::VectorXd BandedSym::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    y[i] += band_(0, i) * x[i];
    for (int k = 1; k <= bw_ && k <= i; ++k) {
      const double a = band_(k, i);
      y[i] += a * x[i - k];
      y[i - k] += a * x[i];
    }
  }
  return y;
}

Eigen::MatrixXd BandedSym::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k <= bw_ && k <= i; ++k) d(i, i - k) = d(i - k, i) = band_(k, i);
  return d;
}

BandedLdlt::BandedLdlt(const BandedSym& a)
    : n_(a.size()), bw_(a.bandwidth()), l_(Eigen::MatrixXd::Zero(a.bandwidth() + 1, a.size())), d_(a.size()) {
  for (int i = 0; i < n_; ++i) {
    // L(i, j) for j in [i - bw, i)
    for (int j = std::max(0, i - bw_); j < i; ++j) {
      double s = a.at(i, j);
      for (int k = std::max(0, i - bw_); k < j; ++k) s -= l_(i - k, i) * l_(j - k, j) * d_[k];
      l_(i - j, i) = s / d_[j];
    }
    double s = a.at(i, i);
    for (int k = std::max(0, i - bw_); k < i; ++k) s -= l_(i - k, i) * l_(i - k, i) * d_[k];
    d_[i] = s;
    if (s < 0) ++negative_;
    if (s == 0.0 || !std::isfinite(s)) {
      ok_ = false;
      d_[i] = s == 0.0 ? 1e-300 : s;
    }
  }
}

Eigen::VectorXd BandedLdlt::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd y = b;
  for (int i = 0; i < n_; ++i)
    for (int k = 1; k <= bw_ && k <= i; ++k) y[i] -= l_(k, i) * y[i - k];
  for (int i = 0; i < n_; ++i) y[i] /= d_[i];
  for (int i = n_ - 1; i >= 0; --i)
    for (int k = 1; k <= bw_ && i + k < n_; ++k) y[i] -= l_(k, i + k) * y[i + k];
  return y;
}

}  // namespace hitchin
