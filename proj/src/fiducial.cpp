#include "hitchin/fiducial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hitchin/numerics.hpp"

namespace hitchin {

using painleve::Extension;
using painleve::PsiProfile;

FiducialValue fiducial_at(const PsiProfile& p, double t, double r) {
  if (!(t > 0)) throw std::domain_error("t must be positive");
  if (!(r > 0)) throw std::domain_error("r must be positive");
  const double rho = 8.0 / 3.0 * t * std::pow(r, 1.5);
  const painleve::PsiValue v = painleve::psi_eval(p, rho, Extension::SmallRhoSeries);
  // r d/dr = 3/2 rho d/drho = 3/2 d/dx
  FiducialValue out;
  out.h = v.psi;
  const double r_dh = 1.5 * v.psi_x;
  out.dh = r_dh / r;
  out.d2h = (2.25 * v.psi_xx - r_dh) / (r * r);
  out.f = 0.125 + 0.25 * r_dh;
  out.df = 0.5625 * v.psi_xx / r;
  return out;
}

std::vector<double> default_fiducial_grid(int n, double r_min) { return geomspace(r_min, 1.0, n); }

FiducialFamily build_family(double t, const PsiProfile& profile, std::span<const double> r) {
  FiducialFamily fam;
  fam.t = t;
  fam.profile = &profile;
  fam.r.assign(r.begin(), r.end());
  const std::size_t n = r.size();
  fam.h.resize(n);
  fam.r_dh.resize(n);
  fam.dh.resize(n);
  fam.d2h.resize(n);
  fam.f.resize(n);
  fam.df.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FiducialValue v = fiducial_at(profile, t, r[i]);
    fam.h[i] = v.h;
    fam.dh[i] = v.dh;
    fam.r_dh[i] = v.dh * r[i];
    fam.d2h[i] = v.d2h;
    fam.f[i] = v.f;
    fam.df[i] = v.df;
  }
  return fam;
}

FiducialFamily build_family(double t, const PsiProfile& profile) {
  const std::vector<double> r = default_fiducial_grid();
  return build_family(t, profile, r);
}

double reduced_residual(const FiducialFamily& fam) {
  double worst = 0;
  const double t2 = fam.t * fam.t;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double r = fam.r[i];
    worst = std::max(worst, std::abs(fam.df[i] / r - 2.0 * t2 * r * std::sinh(2.0 * fam.h[i])));
  }
  return worst;
}

double painleve_residual(const FiducialFamily& fam) {
  double worst = 0;
  const double t2 = fam.t * fam.t;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double r = fam.r[i];
    const double lhs = r * fam.dh[i] + r * r * fam.d2h[i];  // (r d_r)^2 h
    worst = std::max(worst, std::abs(lhs - 8.0 * t2 * r * r * r * std::sinh(2.0 * fam.h[i])));
  }
  return worst;
}

DiskPair fiducial_pair(const FiducialFamily& fam, int n_theta) {
  const PolarGrid g(fam.r, n_theta);
  return diagonal_pair(g, fam.f, fam.df, fam.h, fam.dh, fam.t, PairKind::FiniteT);
}

FBounds verify_f_bounds(const FiducialFamily& fam) {
  FBounds b;
  b.t = fam.t;
  b.f_min = *std::min_element(fam.f.begin(), fam.f.end());
  b.f_max = *std::max_element(fam.f.begin(), fam.f.end());
  b.f_in_range = b.f_min >= 0.0 && b.f_max <= 0.125;
  b.f_monotone = true;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double r = fam.r[i];
    b.sup_f_over_r = std::max(b.sup_f_over_r, fam.f[i] / r);
    b.sup_f_over_r2 = std::max(b.sup_f_over_r2, fam.f[i] / (r * r));
    if (i && fam.f[i] < fam.f[i - 1]) b.f_monotone = false;
  }
  b.normalized_r = std::pow(fam.t, -2.0 / 3.0) * b.sup_f_over_r;
  b.normalized_r2 = std::pow(fam.t, -4.0 / 3.0) * b.sup_f_over_r2;
  return b;
}

double phi_sup_bound(const FiducialFamily& fam) {
  // |phi|^2 = r e^{2h} + r e^{-2h}
  double s = 0;
  for (std::size_t i = 0; i < fam.size(); ++i)
    s = std::max(s, std::sqrt(2.0 * fam.r[i] * std::cosh(2.0 * fam.h[i])));
  return s;
}

RateFit convergence_rate(const PsiProfile& profile, std::span<const double> t_list, double r0, int n_grid) {
  if (t_list.size() < 3) throw std::invalid_argument("need at least three values of t");
  if (!(r0 > 0 && r0 < 1)) throw std::invalid_argument("r0 must lie in (0, 1)");
  const std::vector<double> r = geomspace(r0, 1.0, n_grid);
  RateFit fit;
  for (double t : t_list) {
    const FiducialFamily fam = build_family(t, profile, r);
    double sup = 0;
    for (std::size_t i = 0; i < fam.size(); ++i)
      sup = std::max(sup, std::abs(fam.f[i] - 0.125) + std::abs(fam.h[i]));
    fit.t.push_back(t);
    fit.log_sup.push_back(std::log(sup));
  }
  const LineFit lf = fit_line(fit.t, fit.log_sup);
  fit.delta = -lf.slope;
  fit.intercept = lf.intercept;
  fit.r2 = lf.r2;
  return fit;
}

void write_family_csv(const FiducialFamily& fam, std::ostream& out) {
  out << "r,h,f,df,residual\n";
  const double t2 = fam.t * fam.t;
  char buf[200];
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double r = fam.r[i];
    const double res = fam.df[i] / r - 2.0 * t2 * r * std::sinh(2.0 * fam.h[i]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r, fam.h[i], fam.f[i], fam.df[i], res);
    out << buf;
  }
}

}  // namespace hitchin
