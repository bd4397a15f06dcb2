#pragma once

#include <span>
#include <vector>

#include "hitchin/disk.hpp"
#include "hitchin/fiducial.hpp"

namespace hitchin {

/// Complex gauge transformation sampled on a polar grid, with optional radial derivative.
struct GaugeField {
  PolarGrid grid;
  std::vector<Mat2c> g;
  std::vector<Mat2c> g_r;  ///< may be empty: five-point differences along r are used
};

/// g = diag(e^u, e^{-u}) with u = u(r).
struct DiagonalGauge {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> u_r;

  GaugeField field(const PolarGrid& grid) const;
};

/// Product g h pointwise (the gauge "apply g, then h"), with the product rule for d/dr.
GaugeField compose(const GaugeField& g, const GaugeField& h);

/// (A, Phi)^g:  Phi^g = g^{-1} Phi g,  A_zbar^g = g^{-1} A_zbar g + g^{-1} d_zbar g.
/// Throws std::domain_error if some sample has condition number above `max_condition`.
DiskPair apply_complex_gauge(const DiskPair& pair, const GaugeField& gauge, double max_condition = 1e8);

/// Max over r >= r_min of |A_zbar - A'_zbar| and |phi - phi'| (Frobenius).
double pair_discrepancy(const DiskPair& a, const DiskPair& b, double r_min = 0.0);

/// u_t = -1/4 log r - 1/2 h_t (sign = +1) or its negative (sign = -1, a control).
DiagonalGauge orbit_gauge(const FiducialFamily& fam, double sign = 1.0);

/// Max discrepancy between (A_0, Phi_0)^{g} and the fiducial pair on r >= r_min.
double verify_orbit_finite_t(const FiducialFamily& fam, double r_min = 0.05, double sign = 1.0,
                             int n_theta = 256);

/// Max discrepancy between (A_0, Phi_0)^{g_inf}, g_inf = diag(|z|^{-1/4}, |z|^{1/4}), and the
/// limiting pair on r >= r_min.
double verify_limit_orbit(std::span<const double> r, double r_min = 0.1, int n_theta = 256);

/// g_mu = exp(mu [[0,1],[e^{i theta},0]]) in the stabilizer of the limiting Higgs field.
/// Written through cosh and sinh(x)/x with x^2 = e^{i theta} mu^2, so it is single valued.
struct StabilizerGauge {
  PolarGrid grid;
  std::vector<cplx> mu;
  std::vector<cplx> mu_r;
  bool unitary = false;
  double unitarity_residual = 0;     ///< sup |e^{i theta} mu + conj(mu)|
  double compatibility_residual = 0; ///< sup |d_r(i v) + P w|
  double radial_residual = 0;        ///< sup |d_r mu + w|
  double angular_residual = 0;       ///< sup |P mu - i v|

  GaugeField field() const;
};

/// Solves d_r mu = -w and P mu = i v, P = -i d_theta + 1/2, mode by mode (mu_l = i v_l / (l + 1/2)).
/// Throws std::domain_error if the compatibility d_r(i v) = -P w fails by more than `tol`
/// (the input connection is not flat).
StabilizerGauge stabilizer_normalize(const PolarGrid& grid, std::span<const cplx> v, std::span<const cplx> w,
                                     double tol = 1e-6);

/// Off-diagonal entries v = (A_theta)_{12}, w = (A_r)_{12} of a pair's connection.
void offdiagonal_data(const DiskPair& pair, std::vector<cplx>& v, std::vector<cplx>& w);

/// Gauge field of g_mu from samples of mu and d_r mu.
GaugeField stabilizer_gauge_matrix(const PolarGrid& grid, std::span<const cplx> mu, std::span<const cplx> mu_r);

}  // namespace hitchin
