#pragma once

#include <iosfwd>
#include <vector>

namespace hitchin::painleve {

// The profile psi solves (rho d/drho)^2 psi = 1/2 rho^2 sinh(2 psi) on (0, inf) with
//   psi ~ -log(rho^{1/3} sum_j a_j rho^{4j/3})   as rho -> 0,
//   psi ~ lambda K0(rho)                          as rho -> inf.
// Internally everything is integrated in x = log rho, where the equation reads
//   psi_xx = 1/2 e^{2x} sinh(2 psi).

/// Right-hand side 1/2 rho^2 sinh(2 psi) of the equation in x = log rho.
double ode_rhs(double rho, double psi);

/// a_0, ..., a_{n-1} of the small-rho expansion; a_j for j >= 1 are fixed by a_0.
std::vector<double> series_coefficients(double a0, int n_terms);

struct PsiValue {
  double psi = 0;
  double dpsi = 0;   ///< d psi / d rho
  double psi_x = 0;  ///< rho dpsi/drho
  double psi_xx = 0; ///< (rho d/drho)^2 psi
};

/// Truncated small-rho series. Throws std::domain_error when the first omitted term,
/// relative to the retained sum, exceeds `tol`.
PsiValue small_rho_series(double a0, int n_terms, double rho, double tol = 1e-12);

/// lambda K0(rho) tail.
PsiValue tail(double lambda, double rho);

struct SolveOptions {
  double rho_min = 1e-4;
  double rho_mid = 1.0;
  double rho_max = 40.0;
  double tol = 1e-10;           ///< matching mismatch and residual target
  double ode_tol = 1e-12;
  int nodes_per_side = 3000;    ///< log-spaced nodes on [rho_min, rho_mid] and on [rho_mid, rho_max]
  int series_terms = 3;
  double fd_step = 1e-6;        ///< relative step of the finite-difference Jacobian
  int max_newton = 60;
  double a0_guess = 1.0;
  double lambda_guess = 1.0;
};

struct PsiProfile {
  std::vector<double> rho;
  std::vector<double> x;       ///< log rho
  std::vector<double> psi;
  std::vector<double> dpsi;    ///< psi'(rho), negative
  std::vector<double> psi_x;   ///< rho psi'(rho)
  std::vector<double> psi_xx;  ///< equation right-hand side at the node
  double a0 = 0;
  double lambda = 0;
  std::vector<double> coeffs;  ///< a_0, a_1, ...
  double residual_max = 0;     ///< max |psi_xx - rhs| with psi_xx by finite differences of psi_x
  double mismatch = 0;         ///< matching defect at rho_mid
  int newton_iterations = 0;
  SolveOptions options;

  double rho_min() const { return rho.front(); }
  double rho_max() const { return rho.back(); }
};

/// Two-sided shooting with Newton on (a0, lambda). Throws hitchin::NumericalFailure
/// if Newton does not converge or the merged profile is not positive and decreasing.
PsiProfile solve_connection(const SolveOptions& opt = {});

enum class Extension {
  Strict,          ///< rho in [rho_min/2, 2 rho_max]
  SmallRhoSeries,  ///< any rho in (0, 2 rho_max]; below rho_min the series is used directly
};

/// Cubic Hermite interpolation in x on the grid (psi with psi_x, psi_x with psi_xx);
/// series below rho_min, lambda K0 tail above rho_max. Throws std::domain_error outside the range.
PsiValue psi_eval(const PsiProfile& p, double rho, Extension ext = Extension::Strict);

/// eta(rho) = 1/8 + 3/8 rho psi'(rho).
double eta(const PsiProfile& p, double rho, Extension ext = Extension::Strict);

struct EtaProfile {
  std::vector<double> rho;
  std::vector<double> eta;
};
EtaProfile eta_profile(const PsiProfile& p);

/// Max over the grid of |psi_xx - 1/2 rho^2 sinh 2psi| using fourth-order differences of psi_x.
double ode_residual(const PsiProfile& p);

/// Constant b0 in h_t(r) ~ -1/2 log r + b0 as r -> 0, for the given t.
double small_r_constant(const PsiProfile& p, double t);

/// CSV: rho,psi,dpsi,eta with a header row and 17 significant digits.
void write_csv(const PsiProfile& p, std::ostream& out);

}  // namespace hitchin::painleve
