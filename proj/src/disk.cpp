#include "hitchin/disk.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "hitchin/numerics.hpp"

namespace hitchin {

namespace {
constexpr cplx I{0.0, 1.0};
const Traceless a1{1.0, 0.0, 0.0};

double half_norm(const Traceless& x) { return frobenius_norm(x) / std::numbers::sqrt2; }
}  // namespace

PolarGrid::PolarGrid(std::vector<double> radii, int n_theta) : r(std::move(radii)) {
  if (n_theta < 4 || n_theta % 2) throw std::invalid_argument("n_theta must be even and >= 4");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0)) throw std::invalid_argument("polar grid radii must be positive");
    if (i && !(r[i] > r[i - 1])) throw std::invalid_argument("polar grid radii must increase");
  }
  theta.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) theta[j] = 2.0 * std::numbers::pi * j / n_theta;
}

std::vector<cplx> theta_derivative(std::span<const cplx> f) {
  const int n = static_cast<int>(f.size());
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.begin(), f.end()), spec;
  fft.fwd(spec, in);
  for (int k = 0; k < n; ++k) {
    const int m = k <= n / 2 ? k : k - n;
    spec[k] *= (2 * k == n) ? cplx(0.0) : I * double(m);
  }
  std::vector<cplx> out;
  fft.inv(out, spec);
  return out;
}

std::vector<Traceless> theta_derivative(const PolarGrid& g, const std::vector<Traceless>& field) {
  std::vector<Traceless> out(field.size());
  const std::size_t nt = g.nt();
  std::vector<cplx> ea(nt), eb(nt), ec(nt);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const Traceless& x = field[g.index(i, j)];
      ea[j] = x.a;
      eb[j] = x.b;
      ec[j] = x.c;
    }
    const auto da = theta_derivative(ea), db = theta_derivative(eb), dc = theta_derivative(ec);
    for (std::size_t j = 0; j < nt; ++j) out[g.index(i, j)] = {da[j], db[j], dc[j], field[g.index(i, j)].role};
  }
  return out;
}

std::vector<Traceless> radial_derivative(const PolarGrid& g, const std::vector<Traceless>& field) {
  const FdStencil st(g.r, 5);
  std::vector<Traceless> out(field.size());
  const std::size_t nr = g.nr();
  std::vector<cplx> ea(nr), eb(nr), ec(nr);
  for (std::size_t j = 0; j < g.nt(); ++j) {
    for (std::size_t i = 0; i < nr; ++i) {
      const Traceless& x = field[g.index(i, j)];
      ea[i] = x.a;
      eb[i] = x.b;
      ec[i] = x.c;
    }
    const auto da = st.apply<cplx>(ea), db = st.apply<cplx>(eb), dc = st.apply<cplx>(ec);
    for (std::size_t i = 0; i < nr; ++i) out[g.index(i, j)] = {da[i], db[i], dc[i], field[g.index(i, j)].role};
  }
  return out;
}

namespace {
std::vector<Traceless> wirtinger(const PolarGrid& g, const std::vector<Traceless>& field,
                                 const std::vector<Traceless>& field_r, double sign) {
  const std::vector<Traceless> dth = theta_derivative(g, field);
  const std::vector<Traceless>& dr = field_r.empty() ? radial_derivative(g, field) : field_r;
  std::vector<Traceless> out(field.size());
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j) {
      const std::size_t k = g.index(i, j);
      const cplx pre = 0.5 * std::polar(1.0, sign * g.theta[j]);
      out[k] = pre * (dr[k] + (sign * I / g.r[i]) * dth[k]);
    }
  return out;
}
}  // namespace

std::vector<Traceless> d_z(const PolarGrid& g, const std::vector<Traceless>& field,
                           const std::vector<Traceless>& field_r) {
  return wirtinger(g, field, field_r, -1.0);
}

std::vector<Traceless> d_zbar(const PolarGrid& g, const std::vector<Traceless>& field,
                              const std::vector<Traceless>& field_r) {
  return wirtinger(g, field, field_r, 1.0);
}

DiskPair model_pair(const PolarGrid& g) {
  DiskPair p;
  p.grid = g;
  p.kind = PairKind::Generic;
  p.a_zbar.assign(g.size(), Traceless{});
  p.a_zbar_r.assign(g.size(), Traceless{});
  p.phi.resize(g.size());
  p.phi_r.resize(g.size());
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j) {
      p.phi[g.index(i, j)] = {0.0, 1.0, g.z(i, j), MatrixRole::HiggsCoefficient};
      p.phi_r[g.index(i, j)] = {0.0, 0.0, std::polar(1.0, g.theta[j]), MatrixRole::HiggsCoefficient};
    }
  return p;
}

DiskPair diagonal_pair(const PolarGrid& g, std::span<const double> f, std::span<const double> df,
                       std::span<const double> h, std::span<const double> dh, double t, PairKind kind) {
  const std::size_t nr = g.nr();
  if (f.size() != nr || df.size() != nr || h.size() != nr || dh.size() != nr)
    throw std::invalid_argument("radial profiles must match the grid");
  DiskPair p;
  p.grid = g;
  p.kind = kind;
  p.t = t;
  p.a_zbar.resize(g.size());
  p.a_zbar_r.resize(g.size());
  p.phi.resize(g.size());
  p.phi_r.resize(g.size());
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = g.r[i];
    const double up = std::sqrt(r) * std::exp(h[i]), dn = std::sqrt(r) * std::exp(-h[i]);
    for (std::size_t j = 0; j < g.nt(); ++j) {
      const std::size_t k = g.index(i, j);
      const cplx e = std::polar(1.0, g.theta[j]);
      // A_zbar = -f a1 / zbar = -f e^{i theta}/r a1
      p.a_zbar[k] = (-f[i] * e / r) * a1;
      p.a_zbar_r[k] = (-e * (df[i] / r - f[i] / (r * r))) * a1;
      p.phi[k] = {0.0, up, e * dn, MatrixRole::HiggsCoefficient};
      p.phi_r[k] = {0.0, up * (0.5 / r + dh[i]), e * dn * (0.5 / r - dh[i]), MatrixRole::HiggsCoefficient};
    }
  }
  return p;
}

DiskPair limiting_pair(const PolarGrid& g) {
  const std::vector<double> f(g.nr(), 0.125), zero(g.nr(), 0.0);
  return diagonal_pair(g, f, zero, zero, zero, 0.0, PairKind::Limiting);
}

HitchinResidual hitchin_residual(const DiskPair& pair, double t, double r_min) {
  const PolarGrid& g = pair.grid;
  // F_{z zbar} = d_z A_zbar - d_zbar A_z + [A_z, A_zbar] with A_z = -A_zbar^*.
  const std::vector<Traceless> dza = d_z(g, pair.a_zbar, pair.a_zbar_r);
  const std::vector<Traceless> dzbphi = d_zbar(g, pair.phi, pair.phi_r);
  HitchinResidual res;
  res.combined_by_r.assign(g.nr(), 0.0);
  for (std::size_t i = 0; i < g.nr(); ++i) {
    if (g.r[i] < r_min) continue;
    for (std::size_t j = 0; j < g.nt(); ++j) {
      const std::size_t k = g.index(i, j);
      const Traceless& az = pair.a_zbar[k];
      const Traceless curv = dza[k] + dza[k].adjoint() + commutator(-1.0 * az.adjoint(), az);
      const Traceless comm = t * t * commutator(pair.phi[k], pair.phi[k].adjoint());
      const Traceless holo = dzbphi[k] + commutator(az, pair.phi[k]);
      const double c = half_norm(curv + comm);
      res.curvature_max = std::max(res.curvature_max, half_norm(curv));
      res.commutator_max = std::max(res.commutator_max, half_norm(comm));
      res.combined_max = std::max(res.combined_max, c);
      res.holomorphic_max = std::max(res.holomorphic_max, half_norm(holo));
      res.combined_by_r[i] = std::max(res.combined_by_r[i], c);
    }
  }
  return res;
}

void polar_components(const DiskPair& pair, std::size_t i, std::size_t j, Mat2c& a_r, Mat2c& a_theta) {
  const PolarGrid& g = pair.grid;
  const Mat2c az_bar = pair.a_zbar[g.index(i, j)].matrix();
  const Mat2c az = -az_bar.adjoint();
  const cplx e = std::polar(1.0, g.theta[j]);
  // dz = e^{i theta}(dr + i r dtheta), dzbar = e^{-i theta}(dr - i r dtheta)
  a_r = az * e + az_bar * std::conj(e);
  a_theta = I * g.r[i] * (az * e - az_bar * std::conj(e));
}

double determinant_defect(const DiskPair& pair) {
  const PolarGrid& g = pair.grid;
  double worst = 0;
  for (std::size_t i = 0; i < g.nr(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j) {
      const Traceless& p = pair.phi[g.index(i, j)];
      const cplx det = -p.a * p.a - p.b * p.c;
      worst = std::max(worst, std::abs(det + g.z(i, j)));
    }
  return worst;
}

}  // namespace hitchin
