#pragma once

#include <vector>

#include <Eigen/Core>

namespace hitchin {

/// Graded mesh r_i = (e^{alpha i/n} - 1)/(e^alpha - 1), i = 0..n, on [0, 1] with finite-volume data
/// for -(1/r)(r u')' in the measure r dr.
struct RadialMesh {
  std::vector<double> r;       ///< n + 1 nodes, r_0 = 0, r_n = 1
  std::vector<double> weight;  ///< control-volume weights int r dr (the last one is the Neumann half cell)
  std::vector<double> flux;    ///< flux[i] = r_{i+1/2} / (r_{i+1} - r_i), i = 0..n-1
  std::vector<double> sample;  ///< point where potentials are evaluated: r_i, or the centroid 2a/3 of [0, a] at i = 0
  double alpha = 0;

  static RadialMesh graded(int n, double alpha = 8.0);
  int intervals() const { return static_cast<int>(r.size()) - 1; }
};

/// Symmetric banded matrix (lower band storage: band(k, i) = A(i, i - k)).
class BandedSym {
 public:
  BandedSym() = default;
  BandedSym(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }
  double& at(int i, int j);  ///< requires |i - j| <= bandwidth; (i, j) and (j, i) share storage
  double at(int i, int j) const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;

 private:
  int n_ = 0, bw_ = 0;
  Eigen::MatrixXd band_;
};

/// LDL^T without pivoting for banded symmetric matrices. Counts negative pivots (Sylvester inertia);
/// a zero pivot makes `ok()` false.
class BandedLdlt {
 public:
  explicit BandedLdlt(const BandedSym& a);

  bool ok() const { return ok_; }
  int negative_pivots() const { return negative_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  int n_, bw_;
  Eigen::MatrixXd l_;  // l_(k, i) = L(i, i - k)
  Eigen::VectorXd d_;
  int negative_ = 0;
  bool ok_ = true;
};

}  // namespace hitchin
