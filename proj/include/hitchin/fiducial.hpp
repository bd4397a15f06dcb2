#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hitchin/disk.hpp"
#include "hitchin/painleve.hpp"

namespace hitchin {

/// Radial data of the fiducial solution at a fixed t:
///   h_t(r) = psi(8/3 t r^{3/2}),  f_t(r) = 1/8 + 1/4 r h_t'(r).
/// All derivatives come from psi through the chain rule.
struct FiducialFamily {
  double t = 0;
  std::vector<double> r;
  std::vector<double> h;
  std::vector<double> r_dh;  ///< r h'
  std::vector<double> dh;    ///< h'
  std::vector<double> d2h;   ///< h''
  std::vector<double> f;
  std::vector<double> df;    ///< f'
  const painleve::PsiProfile* profile = nullptr;

  std::size_t size() const { return r.size(); }
};

struct FiducialValue {
  double h, dh, d2h, f, df;
};

/// Pointwise evaluation for any r in (0, 1]; uses the small-rho series below the profile grid.
FiducialValue fiducial_at(const painleve::PsiProfile& p, double t, double r);

/// Default radial grid: 400 geometric nodes on [1e-3, 1].
std::vector<double> default_fiducial_grid(int n = 400, double r_min = 1e-3);

/// The profile must outlive the family.
FiducialFamily build_family(double t, const painleve::PsiProfile& profile, std::span<const double> r);
FiducialFamily build_family(double t, const painleve::PsiProfile& profile);

/// Max over the grid of |(1/r) f' - 2 t^2 r sinh 2h|.
double reduced_residual(const FiducialFamily& fam);
/// Max over the grid of |(r d_r)^2 h - 8 t^2 r^3 sinh 2h|.
double painleve_residual(const FiducialFamily& fam);

/// Disk pair (A_t, Phi_t) of the family on the given number of angular nodes.
DiskPair fiducial_pair(const FiducialFamily& fam, int n_theta = 256);

struct FBounds {
  double t = 0;
  double sup_f_over_r = 0;
  double sup_f_over_r2 = 0;
  double normalized_r = 0;   ///< t^{-2/3} sup f/r
  double normalized_r2 = 0;  ///< t^{-4/3} sup f/r^2
  double f_min = 0, f_max = 0;
  bool f_in_range = false;   ///< 0 <= f <= 1/8
  bool f_monotone = false;   ///< nondecreasing in r
};
FBounds verify_f_bounds(const FiducialFamily& fam);

/// sup over the grid of |phi_t| (Frobenius).
double phi_sup_bound(const FiducialFamily& fam);

struct RateFit {
  double delta = 0;      ///< minus the fitted slope
  double intercept = 0;
  double r2 = 0;
  std::vector<double> t;
  std::vector<double> log_sup;
};

/// Fit of log sup_{r >= r0} (|f_t - 1/8| + |h_t|) against t.
RateFit convergence_rate(const painleve::PsiProfile& profile, std::span<const double> t_list, double r0,
                         int n_grid = 400);

/// CSV: r,h,f,df,residual with 17 significant digits.
void write_family_csv(const FiducialFamily& fam, std::ostream& out);

}  // namespace hitchin
