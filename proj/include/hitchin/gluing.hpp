#pragma once

#include <span>
#include <vector>

#include "hitchin/fiducial.hpp"
#include "hitchin/linearized.hpp"
#include "hitchin/numerics.hpp"
#include "hitchin/radial.hpp"

namespace hitchin {

struct CutoffValue {
  double chi, dchi, d2chi;
};

/// chi(r) = 1 - S((r - onset)/(end - onset)) with the C^infinity step S built from e^{-1/x}.
/// chi = 1 on r <= onset, chi = 0 on r >= end. onset >= 1 gives chi = 1 everywhere.
struct CutoffProfile {
  double onset = 0.55;
  double end = 0.9;

  bool identity() const { return onset >= 1.0; }
  CutoffValue at(double r) const;
  static CutoffProfile none() { return {2.0, 3.0}; }
};

/// Glued radial data on the finite-volume mesh; node 0 is represented by its centroid sample.
struct GluedState {
  double t = 0;
  CutoffProfile cutoff;
  RadialMesh mesh;
  const painleve::PsiProfile* profile = nullptr;
  std::vector<double> h_chi;     ///< chi h_t at mesh.sample
  std::vector<double> f_chi;     ///< 1/8 + r/4 (chi h_t)'
  std::vector<double> df_chi;    ///< f_chi'
  std::vector<double> residual;  ///< f_chi'/r - 2 t^2 r sinh 2 h_chi

  int size() const { return static_cast<int>(h_chi.size()); }
  double residual_sup() const;
  double residual_l2() const;  ///< L^2(r dr) with the control-volume weights
};

/// Throws std::invalid_argument for t <= 0 or a malformed cutoff (end <= onset, onset < 1/2).
GluedState build_glued(double t, const painleve::PsiProfile& profile, const CutoffProfile& cutoff = {},
                       int n = 2000);

/// Radial background (f_chi, h_chi) for the linearized blocks.
Background glued_background(const painleve::PsiProfile& profile, double t, const CutoffProfile& cutoff);

struct ErrorSweep {
  std::vector<double> t;
  std::vector<double> l2;  ///< ||residual||_{L^2(r dr)}
  std::vector<double> sup;
  double delta = 0;        ///< minus the slope of log l2 against t
  double log_c = 0;
  double r2 = 0;
};

/// Needs at least four distinct t; throws NumericalFailure if the fit is degenerate.
ErrorSweep approx_error_sweep(std::span<const double> t_list, const painleve::PsiProfile& profile,
                              const CutoffProfile& cutoff = {}, int n = 2000, int jobs = 1);

struct NewtonStep {
  int iteration = 0;
  double residual_sup = 0;
  double residual_l2 = 0;
  double step_sup = 0;
};

struct NewtonResult {
  std::vector<double> u;      ///< correction at mesh nodes, u(1) = 0
  std::vector<double> jumps;  ///< u_i - u_{i+1}, accumulated separately so the fluxes keep full relative accuracy
  std::vector<NewtonStep> history;
  double residual_pre = 0;   ///< sup of the discrete residual at u = 0
  double residual_post = 0;
  int iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 30;
};

/// Jacobian of the discrete residual at u: K + diag(w 16 t^2 r cosh 2(h_chi + u)), Dirichlet at r = 1.
BandedSym newton_jacobian(const GluedState& s, std::span<const double> u);
/// Discrete residual w (4R) - K u - w 8 t^2 r (sinh 2(h_chi + u) - sinh 2 h_chi) on the unknowns.
/// The flux part is evaluated from the jumps u_i - u_{i+1}; the one-argument form differences u.
Eigen::VectorXd newton_residual(const GluedState& s, std::span<const double> u, std::span<const double> jumps);
Eigen::VectorXd newton_residual(const GluedState& s, std::span<const double> u);

/// Solves (r d_r)^2 (h_chi + u) = 8 t^2 r^3 sinh 2(h_chi + u), u(1) = 0, u bounded at 0.
/// Throws NumericalFailure (with the residual history) if Newton stalls or diverges.
NewtonResult newton_correct(const GluedState& s, const NewtonOptions& opt = {});

struct CorrectionReport {
  double t = 0;
  double residual_pre = 0;
  double residual_post = 0;   ///< sup of the discrete Hitchin residual of h_chi + u
  double residual_post_l2 = 0;
  double smooth_residual = 0; ///< same quantity with u differentiated by stencils (discretization-limited)
  double sup_u = 0;
  double interior_deviation = 0;  ///< sup_{r <= 1/4} |h_chi + u - h_t|
  double g_norm = 0;          ///< 1 / lambda_min of the linearization at u = 0
  double apriori_bound = 0;   ///< 10 ||R||_{L^2} ||G||
  double quadratic_constant = 0;  ///< max r_{k+1}/r_k^2 over steps with r_{k+1} above roundoff
  int quadratic_pairs = 0;        ///< number of iterations entering the ratio test
  int newton_iterations = 0;
};

CorrectionReport corrected_solution_check(const GluedState& s, const NewtonResult& res);

struct GrowthReport {
  std::vector<double> t;
  std::vector<double> sup_df_over_t;
  std::vector<double> sup_f_plus_df_over_t;
  double f_min = 0, f_max = 0;
  double variation = 0;  ///< max/min of sup|f'|/t
};

GrowthReport growth_norm_check(std::span<const double> t_list, const painleve::PsiProfile& profile,
                               const CutoffProfile& cutoff = {}, int n = 2000);

/// Smallest eigenvalue of the coupled l = 0 block at the glued data with a Neumann condition at r = 1.
double neumann_lambda_min(const painleve::PsiProfile& profile, double t, const CutoffProfile& cutoff = {},
                          int n = 2000);

}  // namespace hitchin
