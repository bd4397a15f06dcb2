#include "hitchin/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "hitchin/bessel.hpp"
#include "hitchin/errors.hpp"
#include "hitchin/numerics.hpp"
#include "hitchin/ode.hpp"

namespace hitchin::painleve {

double ode_rhs(double rho, double psi) { return 0.5 * rho * rho * std::sinh(2.0 * psi); }

namespace {

// Power-series helpers in s = rho^{4/3}.
std::vector<double> series_log(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> l(n, 0.0);
  l[0] = std::log(a[0]);
  for (int m = 1; m < n; ++m) {
    double acc = m * a[m];
    for (int k = 1; k < m; ++k) acc -= k * l[k] * a[m - k];
    l[m] = acc / (m * a[0]);
  }
  return l;
}

std::vector<double> series_inverse(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<double> q(n, 0.0);
  q[0] = 1.0 / a[0];
  for (int m = 1; m < n; ++m) {
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) acc += a[j] * q[m - j];
    q[m] = -acc / a[0];
  }
  return q;
}

std::vector<double> series_product(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(std::min(a.size(), b.size()));
  std::vector<double> p(n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k <= m; ++k) p[m] += a[k] * b[m - k];
  return p;
}

State2 rhs(double x, const State2& y) {
  return {y[1], 0.5 * std::exp(2.0 * x) * std::sinh(2.0 * y[0])};
}

double max_abs(const Eigen::Vector2d& v) { return v.cwiseAbs().maxCoeff(); }

struct Shooter {
  const SolveOptions& opt;
  double x_min, x_mid, x_max;
  OdeOptions ode;

  explicit Shooter(const SolveOptions& o)
      : opt(o), x_min(std::log(o.rho_min)), x_mid(std::log(o.rho_mid)), x_max(std::log(o.rho_max)) {
    ode.abs_tol = 1e-300;  // the tail is ~e^{-rho}; pure relative control
    ode.rel_tol = o.ode_tol;
  }

  State2 left_start(double a0) const {
    const PsiValue v = small_rho_series(a0, opt.series_terms, opt.rho_min, 1e-10);
    return {v.psi, v.psi_x};
  }
  State2 right_start(double lambda) const {
    const PsiValue v = tail(lambda, opt.rho_max);
    return {v.psi, v.psi_x};
  }

  Eigen::Vector2d mismatch(double a0, double lambda) const {
    const State2 l = integrate_dopri(rhs, x_min, left_start(a0), x_mid, ode);
    const State2 r = integrate_dopri(rhs, x_max, right_start(lambda), x_mid, ode);
    return l - r;
  }
};

bool newton(const Shooter& sh, double& a0, double& lambda, int max_iter, double tol, double fd_step,
            int& iterations, std::vector<double>& history) {
  Eigen::Vector2d F;
  try {
    F = sh.mismatch(a0, lambda);
  } catch (const NumericalFailure&) {
    return false;
  }
  history.push_back(max_abs(F));
  for (int it = 0; it < max_iter; ++it) {
    if (max_abs(F) < tol) {
      iterations = it;
      return true;
    }
    Eigen::Matrix2d J;
    const double ha = fd_step * std::abs(a0), hl = fd_step * std::abs(lambda);
    J.col(0) = (sh.mismatch(a0 + ha, lambda) - sh.mismatch(a0 - ha, lambda)) / (2 * ha);
    J.col(1) = (sh.mismatch(a0, lambda + hl) - sh.mismatch(a0, lambda - hl)) / (2 * hl);
    const Eigen::Vector2d step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) return false;

    double damp = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const double na = a0 + damp * step[0], nl = lambda + damp * step[1];
      if (na > 0 && nl > 0) {
        try {
          const Eigen::Vector2d Fn = sh.mismatch(na, nl);
          if (Fn.allFinite() && max_abs(Fn) < max_abs(F)) {
            a0 = na;
            lambda = nl;
            F = Fn;
            accepted = true;
            break;
          }
        } catch (const NumericalFailure&) {
        }
      }
      damp *= 0.5;
    }
    history.push_back(max_abs(F));
    if (!accepted) {
      iterations = it + 1;
      return max_abs(F) < tol;
    }
  }
  iterations = max_iter;
  return max_abs(F) < tol;
}

// Hermite cubic on [0,1] with values v0, v1 and slopes d0, d1 (already scaled by the interval).
struct Hermite {
  double value, slope;
};
Hermite hermite(double s, double h, double v0, double d0, double v1, double d1) {
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double g00 = 6 * s2 - 6 * s, g10 = 3 * s2 - 4 * s + 1, g01 = -6 * s2 + 6 * s, g11 = 3 * s2 - 2 * s;
  return {h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1,
          (g00 * v0 + g10 * h * d0 + g01 * v1 + g11 * h * d1) / h};
}

}  // namespace

std::vector<double> series_coefficients(double a0, int n_terms) {
  if (!(a0 > 0)) throw std::domain_error("a0 must be positive");
  if (n_terms < 1) throw std::invalid_argument("need at least one series term");
  std::vector<double> a(n_terms, 0.0);
  a[0] = a0;
  // Matching s^n in  -(16/9) (s d/ds)^2 log S = 1/4 s S^{-2} - 1/4 s^2 S^2.
  for (int n = 1; n < n_terms; ++n) {
    std::vector<double> head(a.begin(), a.begin() + n);
    head.resize(n + 1, 0.0);
    const std::vector<double> inv = series_inverse(head);
    const std::vector<double> inv2 = series_product(inv, inv);
    const std::vector<double> sq = series_product(head, head);
    double rhs_n = 0.25 * inv2[n - 1];
    if (n >= 2) rhs_n -= 0.25 * sq[n - 2];
    const double log_n = -9.0 * rhs_n / (16.0 * n * n);
    // log coefficient L_n = (n a_n - sum_{k<n} k L_k a_{n-k}) / (n a0)
    const std::vector<double> l = series_log(head);
    double acc = 0.0;
    for (int k = 1; k < n; ++k) acc += k * l[k] * a[n - k];
    a[n] = (n * a0 * log_n + acc) / n;
  }
  return a;
}

PsiValue small_rho_series(double a0, int n_terms, double rho, double tol) {
  if (!(rho > 0)) throw std::domain_error("small-rho series needs rho > 0");
  const std::vector<double> a = series_coefficients(a0, n_terms + 1);
  const double s = std::pow(rho, 4.0 / 3.0);

  double S = 0, dS = 0, d2S = 0, sp = 1.0;  // S(s), S'(s), S''(s)
  for (int j = 0; j < n_terms; ++j) {
    S += a[j] * sp;
    if (j >= 1) dS += j * a[j] * sp / s;
    if (j >= 2) d2S += j * (j - 1) * a[j] * sp / (s * s);
    sp *= s;
  }
  const double omitted = std::abs(a[n_terms]) * sp;
  if (omitted > tol * std::abs(S))
    throw std::domain_error("small-rho series truncation error above tolerance; decrease rho");

  PsiValue v;
  v.psi = -std::log(rho) / 3.0 - std::log(S);
  const double u = s * dS / S;                          // (s d/ds) log S
  const double du = (s * dS + s * s * d2S) / S - u * u; // (s d/ds)^2 log S
  v.psi_x = -1.0 / 3.0 - (4.0 / 3.0) * u;
  v.psi_xx = -(16.0 / 9.0) * du;
  v.dpsi = v.psi_x / rho;
  return v;
}

PsiValue tail(double lambda, double rho) {
  PsiValue v;
  v.psi = lambda * bessel_k0(rho);
  v.dpsi = -lambda * bessel_k1(rho);
  v.psi_x = rho * v.dpsi;
  // (rho d/drho)^2 K0 = rho^2 K0 for the linearized tail.
  v.psi_xx = rho * rho * v.psi;
  return v;
}

PsiProfile solve_connection(const SolveOptions& opt) {
  if (!(opt.rho_min > 0 && opt.rho_min < opt.rho_mid && opt.rho_mid < opt.rho_max))
    throw std::invalid_argument("need 0 < rho_min < rho_mid < rho_max");
  if (!(opt.tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (opt.nodes_per_side < 16) throw std::invalid_argument("need at least 16 nodes per side");

  const Shooter sh(opt);
  double a0 = opt.a0_guess, lambda = opt.lambda_guess;
  int iterations = 0;
  std::vector<double> history;
  bool ok = newton(sh, a0, lambda, opt.max_newton, opt.tol, opt.fd_step, iterations, history);

  if (!ok) {
    // Coarse sweep for a better seed.
    double best = INFINITY, ba = a0, bl = lambda;
    for (double la : geomspace(0.05, 20.0, 25)) {
      for (double ll : geomspace(0.05, 20.0, 25)) {
        try {
          const double m = max_abs(sh.mismatch(la, ll));
          if (std::isfinite(m) && m < best) {
            best = m;
            ba = la;
            bl = ll;
          }
        } catch (const NumericalFailure&) {
        }
      }
    }
    a0 = ba;
    lambda = bl;
    int more = 0;
    ok = newton(sh, a0, lambda, opt.max_newton, opt.tol, opt.fd_step, more, history);
    iterations += more;
  }
  if (!ok) throw NumericalFailure("connection Newton iteration did not converge", history);

  PsiProfile p;
  p.options = opt;
  p.a0 = a0;
  p.lambda = lambda;
  p.coeffs = series_coefficients(a0, opt.series_terms);
  p.newton_iterations = iterations;

  const std::vector<double> xl = linspace(sh.x_min, sh.x_mid, opt.nodes_per_side);
  const std::vector<double> xr = linspace(sh.x_mid, sh.x_max, opt.nodes_per_side);

  std::vector<State2> left(xl.size()), right(xr.size());
  left[0] = sh.left_start(a0);
  for (std::size_t i = 1; i < xl.size(); ++i)
    left[i] = integrate_dopri(rhs, xl[i - 1], left[i - 1], xl[i], sh.ode);
  right.back() = sh.right_start(lambda);
  for (std::size_t i = xr.size() - 1; i-- > 0;)
    right[i] = integrate_dopri(rhs, xr[i + 1], right[i + 1], xr[i], sh.ode);
  p.mismatch = (left.back() - right.front()).cwiseAbs().maxCoeff();

  auto push = [&](double x, const State2& y) {
    const double rho = std::exp(x);
    p.x.push_back(x);
    p.rho.push_back(rho);
    p.psi.push_back(y[0]);
    p.psi_x.push_back(y[1]);
    p.dpsi.push_back(y[1] / rho);
    p.psi_xx.push_back(ode_rhs(rho, y[0]));
  };
  for (std::size_t i = 0; i < xl.size(); ++i) push(xl[i], left[i]);
  for (std::size_t i = 1; i < xr.size(); ++i) push(xr[i], right[i]);
  p.rho.front() = opt.rho_min;
  p.rho.back() = opt.rho_max;

  for (std::size_t i = 0; i < p.rho.size(); ++i) {
    if (!(p.psi[i] > 0) || !(p.dpsi[i] < 0))
      throw NumericalFailure("solved profile is not positive and decreasing (invalid bracketing)", history);
    if (i > 0 && !(p.psi[i] < p.psi[i - 1]))
      throw NumericalFailure("solved profile is not strictly decreasing (invalid bracketing)", history);
  }
  p.residual_max = ode_residual(p);
  return p;
}

PsiValue psi_eval(const PsiProfile& p, double rho, Extension ext) {
  const double lo = p.rho_min(), hi = p.rho_max();
  if (!(rho > 0) || rho > 2.0 * hi || (ext == Extension::Strict && rho < 0.5 * lo))
    throw std::domain_error("rho outside the profile's evaluation range");
  if (rho < lo) return small_rho_series(p.a0, p.options.series_terms, rho, 1e-10);
  if (rho > hi) return tail(p.lambda, rho);

  const double x = std::log(rho);
  auto it = std::upper_bound(p.x.begin(), p.x.end(), x);
  std::size_t i = it == p.x.begin() ? 0 : static_cast<std::size_t>(it - p.x.begin()) - 1;
  if (i >= p.x.size() - 1) i = p.x.size() - 2;
  const double h = p.x[i + 1] - p.x[i];
  const double s = std::clamp((x - p.x[i]) / h, 0.0, 1.0);

  PsiValue v;
  if (s == 0.0 || s == 1.0) {
    const std::size_t k = s == 0.0 ? i : i + 1;
    v.psi = p.psi[k];
    v.psi_x = p.psi_x[k];
    v.psi_xx = p.psi_xx[k];
  } else {
    const Hermite a = hermite(s, h, p.psi[i], p.psi_x[i], p.psi[i + 1], p.psi_x[i + 1]);
    const Hermite b = hermite(s, h, p.psi_x[i], p.psi_xx[i], p.psi_x[i + 1], p.psi_xx[i + 1]);
    v.psi = a.value;
    v.psi_x = b.value;
    v.psi_xx = b.slope;
  }
  v.dpsi = v.psi_x / rho;
  return v;
}

double eta(const PsiProfile& p, double rho, Extension ext) {
  return 0.125 + 0.375 * psi_eval(p, rho, ext).psi_x;
}

EtaProfile eta_profile(const PsiProfile& p) {
  EtaProfile e;
  e.rho = p.rho;
  e.eta.resize(p.rho.size());
  for (std::size_t i = 0; i < p.rho.size(); ++i) e.eta[i] = 0.125 + 0.375 * p.psi_x[i];
  return e;
}

double ode_residual(const PsiProfile& p) {
  const std::vector<double> d = differentiate(p.x, p.psi_x, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    worst = std::max(worst, std::abs(d[i] - ode_rhs(p.rho[i], p.psi[i])));
  return worst;
}

double small_r_constant(const PsiProfile& p, double t) {
  // h_t(r) = psi(8/3 t r^{3/2}) ~ -1/3 log(8t/3) - 1/2 log r - log a0.
  return -std::log(8.0 * t / 3.0) / 3.0 - std::log(p.a0);
}

void write_csv(const PsiProfile& p, std::ostream& out) {
  out << "rho,psi,dpsi,eta\n";
  char buf[160];
  for (std::size_t i = 0; i < p.rho.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.rho[i], p.psi[i], p.dpsi[i],
                  0.125 + 0.375 * p.psi_x[i]);
    out << buf;
  }
}

}  // namespace hitchin::painleve
