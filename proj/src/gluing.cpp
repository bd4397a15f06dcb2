#include "hitchin/gluing.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

constexpr double kRoundoffFloor = 1e-14;

// e^{-1/x} and its first two derivatives, 0 for x <= 0.
struct Glue {
  double g, dg, d2g;
};
Glue glue(double x) {
  if (x <= 0) return {0, 0, 0};
  const double g = std::exp(-1.0 / x);
  const double x2 = x * x;
  return {g, g / x2, g * (1.0 - 2.0 * x) / (x2 * x2)};
}

// Smooth step S(x) = g(x) / (g(x) + g(1 - x)) and derivatives.
CutoffValue smooth_step(double x) {
  if (x <= 0) return {0, 0, 0};
  if (x >= 1) return {1, 0, 0};
  const Glue p = glue(x), m = glue(1.0 - x);
  const double q = m.g, dq = -m.dg, d2q = m.d2g;
  const double d = p.g + q, dd = p.dg + dq;
  const double num = p.dg * q - p.g * dq;
  const double dnum = p.d2g * q - p.g * d2q;
  return {p.g / d, num / (d * d), (dnum * d - 2.0 * num * dd) / (d * d * d)};
}

void check_cutoff(const CutoffProfile& c) {
  if (c.identity()) return;
  if (!(c.onset >= 0.5) || !(c.end > c.onset) || c.end > 1.0)
    throw std::invalid_argument("cutoff must satisfy 1/2 <= onset < end <= 1");
}

struct GluedPoint {
  double h_chi, f, df, residual;
};

GluedPoint glued_at(const painleve::PsiProfile& p, double t, const CutoffProfile& c, double r) {
  const FiducialValue v = fiducial_at(p, t, r);
  const CutoffValue x = c.at(r);
  const double g = x.chi * v.h;
  const double dg = x.dchi * v.h + x.chi * v.dh;
  const double d2g = x.d2chi * v.h + 2.0 * x.dchi * v.dh + x.chi * v.d2h;
  GluedPoint out;
  out.h_chi = g;
  // In the chi = 1 region use the fiducial f, f' directly (they avoid the r h' cancellation near 0).
  if (x.chi == 1.0 && x.dchi == 0.0) {
    out.f = v.f;
    out.df = v.df;
  } else {
    out.f = 0.125 + 0.25 * r * dg;
    out.df = 0.25 * (dg + r * d2g);
  }
  out.residual = out.df / r - 2.0 * t * t * r * std::sinh(2.0 * g);
  return out;
}

}  // namespace

CutoffValue CutoffProfile::at(double r) const {
  if (identity()) return {1, 0, 0};
  const double w = end - onset;
  const CutoffValue s = smooth_step((r - onset) / w);
  return {1.0 - s.chi, -s.dchi / w, -s.d2chi / (w * w)};
}

double GluedState::residual_sup() const {
  double m = 0;
  for (double v : residual) m = std::max(m, std::abs(v));
  return m;
}

double GluedState::residual_l2() const { return weighted_l2(residual, mesh.weight); }

GluedState build_glued(double t, const painleve::PsiProfile& profile, const CutoffProfile& cutoff, int n) {
  if (!(t > 0)) throw std::invalid_argument("t must be positive");
  check_cutoff(cutoff);
  GluedState s;
  s.t = t;
  s.cutoff = cutoff;
  s.mesh = RadialMesh::graded(n);
  s.profile = &profile;
  const int m = n + 1;
  s.h_chi.resize(m);
  s.f_chi.resize(m);
  s.df_chi.resize(m);
  s.residual.resize(m);
  for (int i = 0; i < m; ++i) {
    const GluedPoint g = glued_at(profile, t, cutoff, s.mesh.sample[i]);
    s.h_chi[i] = g.h_chi;
    s.f_chi[i] = g.f;
    s.df_chi[i] = g.df;
    s.residual[i] = g.residual;
  }
  return s;
}

Background glued_background(const painleve::PsiProfile& profile, double t, const CutoffProfile& cutoff) {
  check_cutoff(cutoff);
  return [&profile, t, cutoff](double r) {
    const GluedPoint g = glued_at(profile, t, cutoff, r);
    return BackgroundValue{g.f, g.h_chi};
  };
}

ErrorSweep approx_error_sweep(std::span<const double> t_list, const painleve::PsiProfile& profile,
                              const CutoffProfile& cutoff, int n, int jobs) {
  std::vector<double> ts(t_list.begin(), t_list.end());
  std::sort(ts.begin(), ts.end());
  if (std::unique(ts.begin(), ts.end()) - ts.begin() < 4 || ts.size() != t_list.size())
    throw std::invalid_argument("error sweep needs at least four distinct t values");
  ErrorSweep out;
  out.t.assign(t_list.begin(), t_list.end());
  out.l2.resize(out.t.size());
  out.sup.resize(out.t.size());
  auto run = [&](std::size_t k) {
    const GluedState s = build_glued(out.t[k], profile, cutoff, n);
    out.l2[k] = s.residual_l2();
    out.sup[k] = s.residual_sup();
  };
  if (jobs <= 1) {
    for (std::size_t k = 0; k < out.t.size(); ++k) run(k);
  } else {
    std::vector<std::future<void>> pool;
    for (int w = 0; w < jobs; ++w)
      pool.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < out.t.size(); k += jobs) run(k);
      }));
    for (auto& f : pool) f.get();
  }
  std::vector<double> logs(out.l2.size());
  for (std::size_t k = 0; k < logs.size(); ++k) {
    if (!(out.l2[k] > 0) || !std::isfinite(out.l2[k]))
      throw NumericalFailure("glued residual vanished or overflowed; cannot fit a rate", out.l2);
    logs[k] = std::log(out.l2[k]);
  }
  const LineFit fit = fit_line(out.t, logs);
  if (!std::isfinite(fit.slope)) throw NumericalFailure("degenerate rate fit", out.l2);
  out.delta = -fit.slope;
  out.log_c = fit.intercept;
  out.r2 = fit.r2;
  return out;
}

// ---- Newton -----------------------------------------------------------------

BandedSym newton_jacobian(const GluedState& s, std::span<const double> u) {
  const RadialMesh& mesh = s.mesh;
  const int n = mesh.intervals();
  const double t2 = s.t * s.t;
  BandedSym j(n, 1);
  for (int i = 0; i < n; ++i) {
    const double r = mesh.sample[i];
    double d = mesh.weight[i] * 16.0 * t2 * r * std::cosh(2.0 * (s.h_chi[i] + u[i]));
    if (i > 0) d += mesh.flux[i - 1];
    d += mesh.flux[i];
    j.at(i, i) = d;
    if (i > 0) j.at(i, i - 1) = -mesh.flux[i - 1];
  }
  return j;
}

Eigen::VectorXd newton_residual(const GluedState& s, std::span<const double> u) {
  std::vector<double> jumps(s.mesh.intervals());
  for (std::size_t i = 0; i < jumps.size(); ++i) jumps[i] = u[i] - u[i + 1];
  return newton_residual(s, u, jumps);
}

Eigen::VectorXd newton_residual(const GluedState& s, std::span<const double> u, std::span<const double> jumps) {
  const RadialMesh& mesh = s.mesh;
  const int n = mesh.intervals();
  const double t2 = s.t * s.t;
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    const double r = mesh.sample[i];
    const double w = mesh.weight[i];
    // -(K u)_i with u_n = 0
    double ku = mesh.flux[i] * jumps[i];
    if (i > 0) ku -= mesh.flux[i - 1] * jumps[i - 1];
    const double h = s.h_chi[i];
    // sinh 2(h+u) - sinh 2h = 2 cosh(2h + u) sinh u, free of cancellation
    const double ds = 2.0 * std::cosh(2.0 * h + u[i]) * std::sinh(u[i]);
    f[i] = w * 4.0 * s.residual[i] - ku - w * 8.0 * t2 * r * ds;
  }
  return f;
}

namespace {

struct Norms {
  double sup, l2;
};
Norms residual_norms(const GluedState& s, const Eigen::VectorXd& f) {
  Norms out{0, 0};
  for (int i = 0; i < f.size(); ++i) {
    const double v = f[i] / (4.0 * s.mesh.weight[i]);
    out.sup = std::max(out.sup, std::abs(v));
    out.l2 += s.mesh.weight[i] * v * v;
  }
  out.l2 = std::sqrt(out.l2);
  return out;
}

}  // namespace

NewtonResult newton_correct(const GluedState& s, const NewtonOptions& opt) {
  if (!(opt.tol > 0)) throw std::invalid_argument("Newton tolerance must be positive");
  const int n = s.mesh.intervals();
  NewtonResult res;
  res.u.assign(n + 1, 0.0);
  res.jumps.assign(n, 0.0);
  std::vector<double> hist;
  for (int k = 0;; ++k) {
    const Eigen::VectorXd f = newton_residual(s, res.u, res.jumps);
    const Norms nr = residual_norms(s, f);
    if (k == 0) res.residual_pre = nr.sup;
    if (!std::isfinite(nr.sup)) throw NumericalFailure("Newton iterate is not finite", hist);
    hist.push_back(nr.sup);
    NewtonStep step;
    step.iteration = k;
    step.residual_sup = nr.sup;
    step.residual_l2 = nr.l2;
    if (nr.sup < opt.tol) {
      res.history.push_back(step);
      res.residual_post = nr.sup;
      res.iterations = k;
      return res;
    }
    if (k >= opt.max_iter) throw NumericalFailure("Newton did not converge", hist);
    if (k > 3 && nr.sup > 1e3 * hist.front()) throw NumericalFailure("Newton diverged", hist);
    const BandedLdlt lu(newton_jacobian(s, res.u));
    if (!lu.ok() || lu.negative_pivots() != 0) throw NumericalFailure("Newton linearization is not positive", hist);
    const Eigen::VectorXd du = lu.solve(f);
    for (int i = 0; i < n; ++i) {
      res.u[i] += du[i];
      res.jumps[i] += du[i] - (i + 1 < n ? du[i + 1] : 0.0);
    }
    step.step_sup = du.lpNorm<Eigen::Infinity>();
    res.history.push_back(step);
  }
}

CorrectionReport corrected_solution_check(const GluedState& s, const NewtonResult& res) {
  CorrectionReport rep;
  rep.t = s.t;
  rep.residual_pre = res.residual_pre;
  rep.newton_iterations = res.iterations;
  const Norms nr = residual_norms(s, newton_residual(s, res.u, res.jumps));
  rep.residual_post = nr.sup;
  rep.residual_post_l2 = nr.l2;

  const RadialMesh& mesh = s.mesh;
  const int n = mesh.intervals();
  for (int i = 0; i <= n; ++i) {
    rep.sup_u = std::max(rep.sup_u, std::abs(res.u[i]));
    if (mesh.r[i] <= 0.25) rep.interior_deviation = std::max(rep.interior_deviation, std::abs(res.u[i]));
  }

  // Pointwise residual of h_chi + u with u' and u'' from stencils on the nodes (r > 0).
  const FdStencil d(mesh.r);
  const std::vector<double> du = d.apply(std::span<const double>(res.u));
  const std::vector<double> d2u = d.apply(std::span<const double>(du));
  const double t2 = s.t * s.t;
  for (int i = 1; i < n; ++i) {
    const double r = mesh.r[i];
    const double ds = 2.0 * std::cosh(2.0 * s.h_chi[i] + res.u[i]) * std::sinh(res.u[i]);
    const double v = s.residual[i] + 0.25 * (d2u[i] + du[i] / r) - 2.0 * t2 * r * ds;
    rep.smooth_residual = std::max(rep.smooth_residual, std::abs(v));
  }

  BlockSpec spec;
  spec.kind = BlockKind::Scalar;
  spec.ell = 0;
  spec.t = s.t;
  const RadialOperator op = assemble_block(spec, glued_background(*s.profile, s.t, s.cutoff), mesh);
  rep.g_norm = 1.0 / smallest_eigenvalue(op);
  rep.apriori_bound = 10.0 * s.residual_l2() * rep.g_norm;

  // Ratio test over consecutive iterates, skipping steps that already land on the roundoff floor.
  for (std::size_t k = 0; k + 1 < res.history.size(); ++k) {
    const double a = res.history[k].residual_sup, b = res.history[k + 1].residual_sup;
    if (b > kRoundoffFloor) {
      rep.quadratic_constant = std::max(rep.quadratic_constant, b / (a * a));
      ++rep.quadratic_pairs;
    }
  }
  return rep;
}

GrowthReport growth_norm_check(std::span<const double> t_list, const painleve::PsiProfile& profile,
                               const CutoffProfile& cutoff, int n) {
  GrowthReport out;
  out.f_min = INFINITY;
  out.f_max = -INFINITY;
  for (double t : t_list) {
    const GluedState s = build_glued(t, profile, cutoff, n);
    double sd = 0, sfd = 0;
    for (int i = 0; i < s.size(); ++i) {
      sd = std::max(sd, std::abs(s.df_chi[i]));
      sfd = std::max(sfd, std::abs(s.f_chi[i]) + std::abs(s.df_chi[i]));
      out.f_min = std::min(out.f_min, s.f_chi[i]);
      out.f_max = std::max(out.f_max, s.f_chi[i]);
    }
    out.t.push_back(t);
    out.sup_df_over_t.push_back(sd / t);
    out.sup_f_plus_df_over_t.push_back(sfd / t);
  }
  const auto [lo, hi] = std::minmax_element(out.sup_df_over_t.begin(), out.sup_df_over_t.end());
  out.variation = *lo > 0 ? *hi / *lo : INFINITY;
  return out;
}

double neumann_lambda_min(const painleve::PsiProfile& profile, double t, const CutoffProfile& cutoff, int n) {
  BlockSpec spec;
  spec.kind = BlockKind::Coupled;
  spec.ell = 0;
  spec.t = t;
  spec.outer = OuterBoundary::Neumann;
  return smallest_eigenvalue(assemble_block(spec, glued_background(profile, t, cutoff), n));
}

}  // namespace hitchin
