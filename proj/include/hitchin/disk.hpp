#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hitchin/algebra.hpp"

namespace hitchin {

/// Tensor grid r_i x theta_j on the unit disk; theta is equispaced on [0, 2pi).
struct PolarGrid {
  std::vector<double> r;
  std::vector<double> theta;

  PolarGrid() = default;
  PolarGrid(std::vector<double> radii, int n_theta = 256);

  std::size_t nr() const { return r.size(); }
  std::size_t nt() const { return theta.size(); }
  std::size_t size() const { return nr() * nt(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * nt() + j; }
  cplx z(std::size_t i, std::size_t j) const { return std::polar(r[i], theta[j]); }
};

enum class PairKind { FiniteT, Limiting, Generic };

/// A pair (A, Phi) on the punctured disk sampled on a polar grid.
/// The unitary connection is stored through its (0,1) part: A = -A_zbar^* dz + A_zbar dzbar;
/// the Higgs field is Phi = phi dz. Radial derivatives are optional; when absent they are
/// obtained by five-point differences along r.
struct DiskPair {
  PolarGrid grid;
  PairKind kind = PairKind::Generic;
  double t = 0;
  std::vector<Traceless> a_zbar;
  std::vector<Traceless> phi;
  std::vector<Traceless> a_zbar_r;  ///< d/dr A_zbar, may be empty
  std::vector<Traceless> phi_r;     ///< d/dr phi, may be empty
};

/// d/dtheta of periodic samples by FFT (the Nyquist mode is dropped).
std::vector<cplx> theta_derivative(std::span<const cplx> f);

/// Entry-wise d/dtheta of a field on the grid.
std::vector<Traceless> theta_derivative(const PolarGrid& g, const std::vector<Traceless>& field);
/// Entry-wise d/dr, five-point stencils along each ray.
std::vector<Traceless> radial_derivative(const PolarGrid& g, const std::vector<Traceless>& field);

/// d/dz = e^{-i theta}/2 (d_r - i/r d_theta) and d/dzbar = e^{i theta}/2 (d_r + i/r d_theta).
std::vector<Traceless> d_z(const PolarGrid& g, const std::vector<Traceless>& field,
                           const std::vector<Traceless>& field_r);
std::vector<Traceless> d_zbar(const PolarGrid& g, const std::vector<Traceless>& field,
                              const std::vector<Traceless>& field_r);

/// A_0 = 0, Phi_0 = [[0,1],[z,0]] dz.
DiskPair model_pair(const PolarGrid& g);

/// Limiting pair: A = 1/8 diag(1,-1)(dz/z - dzbar/zbar), phi = [[0, |z|^{1/2}], [z |z|^{-1/2}, 0]].
DiskPair limiting_pair(const PolarGrid& g);

/// Rotationally symmetric pair A = f diag(1,-1)(dz/z - dzbar/zbar),
/// phi = [[0, r^{1/2} e^{h}], [r^{1/2} e^{i theta} e^{-h}, 0]], with exact radial derivatives.
/// All vectors are indexed like g.r.
DiskPair diagonal_pair(const PolarGrid& g, std::span<const double> f, std::span<const double> df,
                       std::span<const double> h, std::span<const double> dh, double t,
                       PairKind kind = PairKind::FiniteT);

struct HitchinResidual {
  double curvature_max = 0;    ///< sup |F_A|
  double commutator_max = 0;   ///< sup t^2 |[phi, phi^*]|
  double combined_max = 0;     ///< sup |F_A + t^2 [phi, phi^*]|
  double holomorphic_max = 0;  ///< sup |dbar_A phi|
  std::vector<double> combined_by_r;  ///< max over theta, per radius

  double max() const { return std::max(combined_max, holomorphic_max); }
};

/// sup over the grid of |det phi + z|: how far det Phi is from -z dz^2.
double determinant_defect(const DiskPair& pair);

/// Rescaled Hitchin residual on radii r >= r_min. Norms are Frobenius divided by sqrt 2,
/// so for diagonal fields c diag(1,-1) the value is |c|.
HitchinResidual hitchin_residual(const DiskPair& pair, double t, double r_min = 0.0);

/// Polar components A_r, A_theta of the connection (skew-Hermitian matrices).
void polar_components(const DiskPair& pair, std::size_t i, std::size_t j, Mat2c& a_r, Mat2c& a_theta);

}  // namespace hitchin
