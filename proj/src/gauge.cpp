#include "hitchin/gauge.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>

#include "hitchin/numerics.hpp"

namespace hitchin {

namespace {
constexpr cplx I{0.0, 1.0};

// d/dtheta of every entry of a matrix field, one FFT per entry and radius.
std::vector<Mat2c> theta_derivative_mat(const PolarGrid& grid, const std::vector<Mat2c>& g) {
  std::vector<Mat2c> out(g.size());
  std::vector<cplx> e(grid.nt());
  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        for (std::size_t j = 0; j < grid.nt(); ++j) e[j] = g[grid.index(i, j)](a, b);
        const std::vector<cplx> d = theta_derivative(e);
        for (std::size_t j = 0; j < grid.nt(); ++j) out[grid.index(i, j)](a, b) = d[j];
      }
  return out;
}

std::vector<Mat2c> radial_derivative_mat(const PolarGrid& grid, const std::vector<Mat2c>& g) {
  const FdStencil st(grid.r, 5);
  std::vector<Mat2c> out(g.size());
  std::vector<cplx> e(grid.nr());
  for (std::size_t j = 0; j < grid.nt(); ++j)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        for (std::size_t i = 0; i < grid.nr(); ++i) e[i] = g[grid.index(i, j)](a, b);
        const std::vector<cplx> d = st.apply<cplx>(e);
        for (std::size_t i = 0; i < grid.nr(); ++i) out[grid.index(i, j)](a, b) = d[i];
      }
  return out;
}

// Fourier multiplier on periodic samples: f -> sum_m mult(m) f_m e^{i m theta}.
template <typename F>
std::vector<cplx> fourier_multiply(std::span<const cplx> f, F mult) {
  const int n = static_cast<int>(f.size());
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.begin(), f.end()), spec, out;
  fft.fwd(spec, in);
  for (int k = 0; k < n; ++k) spec[k] *= mult(k < n / 2 ? k : k - n);
  fft.inv(out, spec);
  return out;
}

cplx sinhc(cplx x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0 + x * x * x * x / 120.0;
  return std::sinh(x) / x;
}
}  // namespace

GaugeField DiagonalGauge::field(const PolarGrid& grid) const {
  if (r.size() != grid.nr() || u.size() != grid.nr() || u_r.size() != grid.nr())
    throw std::invalid_argument("diagonal gauge does not match the grid");
  GaugeField gf;
  gf.grid = grid;
  gf.g.resize(grid.size());
  gf.g_r.resize(grid.size());
  for (std::size_t i = 0; i < grid.nr(); ++i) {
    const double ep = std::exp(u[i]), em = std::exp(-u[i]);
    Mat2c g, gr;
    g << ep, 0, 0, em;
    gr << u_r[i] * ep, 0, 0, -u_r[i] * em;
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      gf.g[grid.index(i, j)] = g;
      gf.g_r[grid.index(i, j)] = gr;
    }
  }
  return gf;
}

GaugeField compose(const GaugeField& g, const GaugeField& h) {
  if (g.g.size() != h.g.size()) throw std::invalid_argument("gauge fields live on different grids");
  GaugeField out;
  out.grid = g.grid;
  out.g.resize(g.g.size());
  const bool deriv = !g.g_r.empty() && !h.g_r.empty();
  if (deriv) out.g_r.resize(g.g.size());
  for (std::size_t k = 0; k < g.g.size(); ++k) {
    out.g[k] = g.g[k] * h.g[k];
    if (deriv) out.g_r[k] = g.g_r[k] * h.g[k] + g.g[k] * h.g_r[k];
  }
  return out;
}

DiskPair apply_complex_gauge(const DiskPair& pair, const GaugeField& gauge, double max_condition) {
  const PolarGrid& grid = pair.grid;
  if (gauge.g.size() != grid.size()) throw std::invalid_argument("gauge does not match the pair's grid");
  const std::vector<Mat2c> g_th = theta_derivative_mat(grid, gauge.g);
  const std::vector<Mat2c> g_r = gauge.g_r.empty() ? radial_derivative_mat(grid, gauge.g) : gauge.g_r;

  DiskPair out;
  out.grid = grid;
  out.kind = PairKind::Generic;
  out.t = pair.t;
  out.a_zbar.resize(grid.size());
  out.phi.resize(grid.size());
  const bool phi_deriv = !pair.phi_r.empty();
  if (phi_deriv) out.phi_r.resize(grid.size());

  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      const std::size_t k = grid.index(i, j);
      const Mat2c& g = gauge.g[k];
      const Eigen::JacobiSVD<Mat2c> svd(g);
      const auto s = svd.singularValues();
      if (!(s(1) > 0) || s(0) / s(1) > max_condition)
        throw std::domain_error("gauge transformation is numerically singular");
      const Mat2c gi = g.inverse();
      const Mat2c dzb = 0.5 * std::polar(1.0, grid.theta[j]) * (g_r[k] + (I / grid.r[i]) * g_th[k]);
      const Mat2c phi = pair.phi[k].matrix();
      out.phi[k] = Traceless::from_matrix(gi * phi * g, 1e-8, MatrixRole::HiggsCoefficient);
      out.a_zbar[k] = Traceless::from_matrix(gi * pair.a_zbar[k].matrix() * g + gi * dzb, 1e-8);
      if (phi_deriv) {
        const Mat2c d = -gi * g_r[k] * gi * phi * g + gi * pair.phi_r[k].matrix() * g + gi * phi * g_r[k];
        out.phi_r[k] = Traceless::from_matrix(d, 1e-6, MatrixRole::HiggsCoefficient);
      }
    }
  return out;
}

double pair_discrepancy(const DiskPair& a, const DiskPair& b, double r_min) {
  if (a.grid.size() != b.grid.size()) throw std::invalid_argument("pairs live on different grids");
  double worst = 0;
  for (std::size_t i = 0; i < a.grid.nr(); ++i) {
    if (a.grid.r[i] < r_min) continue;
    for (std::size_t j = 0; j < a.grid.nt(); ++j) {
      const std::size_t k = a.grid.index(i, j);
      worst = std::max(worst, frobenius_norm(a.a_zbar[k] - b.a_zbar[k]));
      worst = std::max(worst, frobenius_norm(a.phi[k] - b.phi[k]));
    }
  }
  return worst;
}

DiagonalGauge orbit_gauge(const FiducialFamily& fam, double sign) {
  DiagonalGauge d;
  d.r = fam.r;
  d.u.resize(fam.size());
  d.u_r.resize(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    d.u[i] = sign * (-0.25 * std::log(fam.r[i]) - 0.5 * fam.h[i]);
    d.u_r[i] = sign * (-0.25 / fam.r[i] - 0.5 * fam.dh[i]);
  }
  return d;
}

double verify_orbit_finite_t(const FiducialFamily& fam, double r_min, double sign, int n_theta) {
  const PolarGrid grid(fam.r, n_theta);
  const DiskPair gauged = apply_complex_gauge(model_pair(grid), orbit_gauge(fam, sign).field(grid));
  return pair_discrepancy(gauged, fiducial_pair(fam, n_theta), r_min);
}

double verify_limit_orbit(std::span<const double> r, double r_min, int n_theta) {
  const PolarGrid grid(std::vector<double>(r.begin(), r.end()), n_theta);
  DiagonalGauge d;
  d.r = grid.r;
  for (double x : grid.r) {
    d.u.push_back(-0.25 * std::log(x));
    d.u_r.push_back(-0.25 / x);
  }
  const DiskPair gauged = apply_complex_gauge(model_pair(grid), d.field(grid));
  return pair_discrepancy(gauged, limiting_pair(grid), r_min);
}

GaugeField StabilizerGauge::field() const { return stabilizer_gauge_matrix(grid, mu, mu_r); }

GaugeField stabilizer_gauge_matrix(const PolarGrid& grid, std::span<const cplx> mu, std::span<const cplx> mu_r) {
  if (mu.size() != grid.size() || mu_r.size() != grid.size())
    throw std::invalid_argument("stabilizer data does not match the grid");
  GaugeField gf;
  gf.grid = grid;
  gf.g.resize(grid.size());
  gf.g_r.resize(grid.size());
  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      const std::size_t k = grid.index(i, j);
      const cplx e = std::polar(1.0, grid.theta[j]);
      const cplx x = std::sqrt(e * mu[k] * mu[k]);  // cosh and sinh(x)/x are even in x
      const cplx eta1 = std::cosh(x), eta2 = mu[k] * sinhc(x);
      Mat2c g, gamma;
      g << eta1, eta2, e * eta2, eta1;
      gamma << 0, 1, e, 0;
      gf.g[k] = g;
      gf.g_r[k] = mu_r[k] * gamma * g;
    }
  return gf;
}

void offdiagonal_data(const DiskPair& pair, std::vector<cplx>& v, std::vector<cplx>& w) {
  const PolarGrid& grid = pair.grid;
  v.resize(grid.size());
  w.resize(grid.size());
  Mat2c ar, ath;
  for (std::size_t i = 0; i < grid.nr(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      polar_components(pair, i, j, ar, ath);
      w[grid.index(i, j)] = ar(0, 1);
      v[grid.index(i, j)] = ath(0, 1);
    }
}

StabilizerGauge stabilizer_normalize(const PolarGrid& grid, std::span<const cplx> v, std::span<const cplx> w,
                                     double tol) {
  if (v.size() != grid.size() || w.size() != grid.size())
    throw std::invalid_argument("stabilizer input does not match the grid");
  const std::size_t nr = grid.nr(), nt = grid.nt();
  StabilizerGauge s;
  s.grid = grid;
  s.mu.resize(grid.size());
  s.mu_r.resize(grid.size());

  const auto P = [](int m) { return cplx(m + 0.5); };
  std::vector<cplx> ray(nr), pw_all(grid.size());
  for (std::size_t i = 0; i < nr; ++i) {
    const std::span<const cplx> vi = v.subspan(i * nt, nt), wi = w.subspan(i * nt, nt);
    // |m + 1/2| >= 1/2 for every integer m, so the division is always safe.
    const std::vector<cplx> mu = fourier_multiply(vi, [](int m) { return I / (m + 0.5); });
    const std::vector<cplx> pmu = fourier_multiply<decltype(P)>(mu, P);
    const std::vector<cplx> pw = fourier_multiply(wi, P);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = grid.index(i, j);
      s.mu[k] = mu[j];
      s.mu_r[k] = -w[k];
      pw_all[k] = pw[j];
      s.angular_residual = std::max(s.angular_residual, std::abs(pmu[j] - I * v[k]));
      s.unitarity_residual =
          std::max(s.unitarity_residual, std::abs(std::polar(1.0, grid.theta[j]) * mu[j] + std::conj(mu[j])));
    }
  }
  const FdStencil st(grid.r, 5);
  std::vector<cplx> vr(nr), mr(nr);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      vr[i] = v[grid.index(i, j)];
      mr[i] = s.mu[grid.index(i, j)];
    }
    const std::vector<cplx> dv = st.apply<cplx>(vr), dm = st.apply<cplx>(mr);
    for (std::size_t i = 0; i < nr; ++i) {
      const std::size_t k = grid.index(i, j);
      s.compatibility_residual = std::max(s.compatibility_residual, std::abs(I * dv[i] + pw_all[k]));
      s.radial_residual = std::max(s.radial_residual, std::abs(dm[i] + w[k]));
    }
  }
  if (s.compatibility_residual > tol)
    throw std::domain_error("connection data is not flat: d_r(iv) != -P w");
  s.unitary = s.unitarity_residual <= tol;
  return s;
}

}  // namespace hitchin
