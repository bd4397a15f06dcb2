#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hitchin/fiducial.hpp"
#include "hitchin/numerics.hpp"
#include "hitchin/radial.hpp"

namespace hitchin {

/// Radial background (f, h) entering the potentials; evaluated at r > 0.
struct BackgroundValue {
  double f = 0;
  double h = 0;
};
using Background = std::function<BackgroundValue(double r)>;

/// f = 0, h = 0.
Background flat_background();
/// f_t, h_t of the fiducial solution (small-rho series near 0).
Background fiducial_background(const painleve::PsiProfile& profile, double t);

enum class BlockKind {
  Scalar,   ///< i V:   P_l + 16 t^2 r cosh 2h
  Coupled,  ///< i V^perp on E_l:  diag(P^-_{l,t}, P^+_{l-1,t}) + 8 t^2 r [[cosh 2h, 1], [1, cosh 2h]]
};
enum class OuterBoundary { Dirichlet, Neumann };

struct BlockSpec {
  BlockKind kind = BlockKind::Coupled;
  int ell = 0;
  double t = 1.0;
  bool flat = false;         ///< drop f and the algebraic term: the flat Laplacian block
  bool algebraic = true;     ///< include the t^2 M_phi term
  OuterBoundary outer = OuterBoundary::Dirichlet;
};

/// Finite-volume discretization of -(1/r^2)(r d_r)^2 + V on (0,1) in the measure r dr.
/// Unknowns are interleaved by node; a component is pinned to 0 at r = 0 when its angular
/// momentum is nonzero, and left free (natural condition) otherwise.
struct RadialOperator {
  BlockSpec spec;
  RadialMesh mesh;
  int components = 1;
  std::vector<int> node;       ///< unknown -> mesh node
  std::vector<int> component;  ///< unknown -> component
  BandedSym stiffness;         ///< K: flux part plus weight * potential
  Eigen::VectorXd weight;      ///< mass (control-volume weight) per unknown
  std::vector<Eigen::Matrix2d> potential;  ///< per mesh node (1x1 blocks use (0,0))
  double asymmetry = 0;        ///< relative asymmetry of the row-wise assembly after W^{1/2} similarity

  int size() const { return static_cast<int>(weight.size()); }
  /// Action of the continuous operator: W^{-1} K x.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Smallest eigenvalue of the pointwise potential over the nodes.
  double potential_floor() const;
};

/// Angular momenta (l) or (l, l-1) that decide the condition at r = 0.
std::vector<int> angular_momenta(const BlockSpec& spec);

RadialOperator assemble_block(const BlockSpec& spec, const Background& bg, const RadialMesh& mesh);
RadialOperator assemble_block(const BlockSpec& spec, const Background& bg, int n);

/// Smallest generalized eigenvalue of K x = lambda W x by bisection on the inertia of K - sigma W.
/// Throws hitchin::NumericalFailure if the bracket cannot be established.
double smallest_eigenvalue(const RadialOperator& op, double rel_tol = 1e-11);

/// ||S_a S_b^{-1}||_2 with S = W^{-1/2} K W^{-1/2}, by power iteration.
double composed_norm(const RadialOperator& a, const RadialOperator& b, int max_iter = 400, double tol = 1e-9);

struct ModeReport {
  BlockKind kind = BlockKind::Coupled;
  int ell = 0;
  double lambda_min = 0;
  double g_l2 = 0;        ///< 1 / lambda_min
  double g_h2 = 0;        ///< ||Delta G_l||
  double floor = 0;       ///< pointwise potential floor (lower bound for lambda_min)
};

struct SpectralReport {
  double t = 0;
  int ell_max = 0;
  int n = 0;
  std::vector<ModeReport> modes;
  double g_norm_l2 = 0;
  double g_norm_h2 = 0;
  double kappa = 0;       ///< min over l >= 2 of floor / l^2 (coupled blocks)
  bool tail_ok = false;   ///< 1/lambda_min <= 1/(kappa l^2) for every coupled block with l >= 2
};

/// Green-operator norms for |l| <= l_max (scalar and coupled blocks). `jobs` > 1 evaluates
/// the modes concurrently; the result does not depend on it.
SpectralReport green_norms(double t, int ell_max, const painleve::PsiProfile& profile, int n = 2000, int jobs = 1);

// ---- indicial roots -------------------------------------------------------

/// Exact half-integer m/2.
struct HalfInteger {
  int twice = 0;
  double value() const { return 0.5 * twice; }
  auto operator<=>(const HalfInteger&) const = default;
  std::string str() const;
};

/// Tangential operator (nabla_theta)^2 on the mode e^{i l theta}, in the basis (i tau1, i tau2, i tau3),
/// for the connection tau1/4 d theta.
Eigen::Matrix3cd tangential_matrix(int ell);

struct IndicialRoot {
  HalfInteger nu;
  int multiplicity = 0;
};

/// Roots nu with -nu^2 an eigenvalue of the tangential operator, over l in [l_min, l_max];
/// each candidate is confirmed by an exact Gaussian-integer determinant. Sorted, with multiplicity.
std::vector<IndicialRoot> indicial_roots(int ell_min, int ell_max);
/// The roots found on a single mode (scalar then coupled), with repetition.
std::vector<HalfInteger> mode_indicial_roots(int ell);

/// Roots for the anti-periodic line spanned by sin(theta/2) i tau2 + cos(theta/2) i tau3:
/// +-(l + 1/2) for 0 <= l <= l_max. Throws if that section is not parallel.
std::vector<HalfInteger> restricted_indicial_roots(int ell_max);

// ---- conic Poisson solve -------------------------------------------------

struct ConicSolution {
  RadialMesh mesh;
  HalfInteger nu;
  double delta = 1.0;
  std::vector<double> u;  ///< on mesh nodes, u(0) = u(1) = 0
};

/// -(u'' + u'/r - nu^2 u/r^2) = rhs on (0,1), u(1) = 0, u ~ r^{|nu|} at 0; rhs sampled on mesh nodes.
/// nu must lie in Z + 1/2 and the weight delta in (1/2, 3/2); otherwise std::invalid_argument.
ConicSolution conic_poisson_solve(HalfInteger nu, const std::vector<double>& rhs, double delta,
                                  const RadialMesh& mesh);
ConicSolution conic_poisson_solve(HalfInteger nu, const std::function<double(double)>& rhs, double delta,
                                  int n = 2000);

/// Discrete operator applied to nodal values (interior nodes; boundary entries are 0).
std::vector<double> conic_apply(HalfInteger nu, const RadialMesh& mesh, const std::vector<double>& u);

/// Log-log slope of |u| on [r_lo, r_hi].
LineFit decay_exponent(const ConicSolution& s, double r_lo = 1e-3, double r_hi = 1e-2);

}  // namespace hitchin
