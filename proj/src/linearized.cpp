#include "hitchin/linearized.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <future>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "hitchin/algebra.hpp"
#include "hitchin/errors.hpp"

namespace hitchin {

Background flat_background() {
  return [](double) { return BackgroundValue{}; };
}

Background fiducial_background(const painleve::PsiProfile& profile, double t) {
  return [&profile, t](double r) {
    const FiducialValue v = fiducial_at(profile, t, r);
    return BackgroundValue{v.f, v.h};
  };
}

std::vector<int> angular_momenta(const BlockSpec& spec) {
  if (spec.kind == BlockKind::Scalar) return {spec.ell};
  return {spec.ell, spec.ell - 1};
}

namespace {

Eigen::Matrix2d block_potential(const BlockSpec& spec, double r, const BackgroundValue& bg) {
  Eigen::Matrix2d v = Eigen::Matrix2d::Zero();
  const double f = spec.flat ? 0.0 : bg.f;
  const bool alg = spec.algebraic && !spec.flat;
  const double t2 = spec.t * spec.t;
  const double l = spec.ell;
  if (spec.kind == BlockKind::Scalar) {
    v(0, 0) = l * l / (r * r);
    if (alg) v(0, 0) += 16.0 * t2 * r * std::cosh(2.0 * bg.h);
    return v;
  }
  v(0, 0) = (l - 4.0 * f) * (l - 4.0 * f) / (r * r);
  v(1, 1) = (l - 1.0 + 4.0 * f) * (l - 1.0 + 4.0 * f) / (r * r);
  if (alg) {
    const double w = 8.0 * t2 * r;
    const double c = std::cosh(2.0 * bg.h);
    v(0, 0) += w * c;
    v(1, 1) += w * c;
    v(0, 1) = v(1, 0) = w;
  }
  return v;
}

}  // namespace

RadialOperator assemble_block(const BlockSpec& spec, const Background& bg, const RadialMesh& mesh) {
  if (!(spec.t > 0)) throw std::invalid_argument("t must be positive");
  RadialOperator op;
  op.spec = spec;
  op.mesh = mesh;
  op.components = spec.kind == BlockKind::Scalar ? 1 : 2;
  const int n = mesh.intervals();
  const std::vector<int> mom = angular_momenta(spec);
  const bool neumann = spec.outer == OuterBoundary::Neumann;

  op.potential.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = mesh.sample[i];
    op.potential[i] = block_potential(spec, s, spec.flat ? BackgroundValue{} : bg(s));
  }

  // Unknown numbering, interleaved by node.
  std::vector<std::array<int, 2>> id(n + 1, {-1, -1});
  for (int i = 0; i <= n; ++i) {
    if (i == n && !neumann) continue;
    for (int c = 0; c < op.components; ++c) {
      if (i == 0 && mom[c] != 0) continue;
      id[i][c] = static_cast<int>(op.node.size());
      op.node.push_back(i);
      op.component.push_back(c);
    }
  }
  const int m = static_cast<int>(op.node.size());
  op.weight.resize(m);
  for (int p = 0; p < m; ++p) op.weight[p] = mesh.weight[op.node[p]];

  const int bw = op.components;
  op.stiffness = BandedSym(m, bw);
  BandedSym upper(m, bw);
  double scale = 0;
  for (int p = 0; p < m; ++p) {
    const int i = op.node[p], c = op.component[p];
    const double w = mesh.weight[i];
    double diag = w * op.potential[i](c, c);
    if (i > 0) diag += mesh.flux[i - 1];
    if (i < n) diag += mesh.flux[i];
    auto put = [&](int q, double val) {
      if (q < 0) return;
      if (q <= p) op.stiffness.at(p, q) = val;
      else upper.at(q, p) = val;  // stored transposed so both triangles can be compared
      scale = std::max(scale, std::abs(val) / std::sqrt(op.weight[p] * op.weight[q]));
    };
    put(p, diag);
    if (i > 0) put(id[i - 1][c], -mesh.flux[i - 1]);
    if (i < n) put(id[i + 1][c], -mesh.flux[i]);
    if (op.components == 2) put(id[i][1 - c], w * op.potential[i](c, 1 - c));
  }
  for (int p = 0; p < m; ++p)
    for (int q = std::max(0, p - bw); q < p; ++q)
      op.asymmetry = std::max(op.asymmetry, std::abs(op.stiffness.at(p, q) - upper.at(p, q)) /
                                                std::sqrt(op.weight[p] * op.weight[q]));
  if (scale > 0) op.asymmetry /= scale;
  return op;
}

RadialOperator assemble_block(const BlockSpec& spec, const Background& bg, int n) {
  return assemble_block(spec, bg, RadialMesh::graded(n));
}

Eigen::VectorXd RadialOperator::apply(const Eigen::VectorXd& x) const {
  return stiffness.multiply(x).cwiseQuotient(weight);
}

double RadialOperator::potential_floor() const {
  // Smallest eigenvalue of the potential block over the nodes carrying unknowns; K >= W V makes it
  // a lower bound for the spectrum.
  double lo = INFINITY;
  for (int p = 0; p < size(); ++p) {
    const Eigen::Matrix2d& v = potential[node[p]];
    if (components == 1) {
      lo = std::min(lo, v(0, 0));
    } else {
      const double mean = 0.5 * (v(0, 0) + v(1, 1)), half = 0.5 * (v(0, 0) - v(1, 1));
      lo = std::min(lo, mean - std::hypot(half, v(0, 1)));
    }
  }
  return lo;
}

namespace {

int count_below(const RadialOperator& op, double sigma) {
  BandedSym a = op.stiffness;
  for (int p = 0; p < op.size(); ++p) a.at(p, p) -= sigma * op.weight[p];
  return BandedLdlt(a).negative_pivots();
}

Eigen::VectorXd start_vector(int n) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

}  // namespace

double smallest_eigenvalue(const RadialOperator& op, double rel_tol) {
  const int m = op.size();
  // Rayleigh quotient of a smooth trial vector bounds lambda_min from above.
  Eigen::VectorXd x(m);
  for (int p = 0; p < m; ++p) {
    const double r = op.mesh.r[op.node[p]];
    x[p] = op.spec.outer == OuterBoundary::Neumann ? 1.0 + r : std::sin(M_PI * r) + 1e-3;
  }
  double hi = x.dot(op.stiffness.multiply(x)) / x.dot(op.weight.cwiseProduct(x));
  hi *= 1.0 + 1e-9;
  double lo = 0.0;
  if (count_below(op, lo) != 0) {
    // Not positive definite: walk down until the bracket holds.
    lo = -std::abs(hi);
    int guard = 0;
    while (count_below(op, lo) != 0) {
      lo *= 2.0;
      if (++guard > 200) throw NumericalFailure("could not bracket the smallest eigenvalue");
    }
  }
  if (count_below(op, hi) < 1) throw NumericalFailure("eigenvalue upper bracket failed");
  for (int it = 0; it < 300 && hi - lo > rel_tol * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(op, mid) >= 1) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double composed_norm(const RadialOperator& a, const RadialOperator& b, int max_iter, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("operators act on different unknowns");
  const BandedLdlt lb(b.stiffness);
  if (!lb.ok()) throw NumericalFailure("singular operator in composed norm");
  const Eigen::VectorXd sq = b.weight.cwiseSqrt();
  auto s_a = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return a.stiffness.multiply(v.cwiseQuotient(sq)).cwiseQuotient(sq); };
  auto s_b_inv = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lb.solve(v.cwiseProduct(sq)).cwiseProduct(sq); };

  Eigen::VectorXd x = start_vector(a.size());
  x.normalize();
  double est = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd z = s_a(s_b_inv(x));
    const Eigen::VectorXd y = s_b_inv(s_a(z));
    const double next = std::sqrt(z.squaredNorm());  // ||S_a S_b^{-1} x|| with ||x|| = 1
    x = y / y.norm();
    if (it > 2 && std::abs(next - est) <= tol * next) return std::max(next, est);
    est = next;
  }
  return est;
}

SpectralReport green_norms(double t, int ell_max, const painleve::PsiProfile& profile, int n, int jobs) {
  if (ell_max < 1) throw std::invalid_argument("l_max must be at least 1");
  SpectralReport rep;
  rep.t = t;
  rep.ell_max = ell_max;
  rep.n = n;
  const RadialMesh mesh = RadialMesh::graded(n);
  const Background bg = fiducial_background(profile, t);

  std::vector<BlockSpec> specs;
  for (BlockKind kind : {BlockKind::Scalar, BlockKind::Coupled})
    for (int l = -ell_max; l <= ell_max; ++l) {
      BlockSpec s;
      s.kind = kind;
      s.ell = l;
      s.t = t;
      specs.push_back(s);
    }
  auto run = [&](const BlockSpec& s) {
    const RadialOperator op = assemble_block(s, bg, mesh);
    BlockSpec fs = s;
    fs.flat = true;
    const RadialOperator flat = assemble_block(fs, bg, mesh);
    ModeReport m;
    m.kind = s.kind;
    m.ell = s.ell;
    m.lambda_min = smallest_eigenvalue(op);
    m.g_l2 = 1.0 / m.lambda_min;
    m.g_h2 = composed_norm(flat, op);
    m.floor = op.potential_floor();
    return m;
  };
  rep.modes.resize(specs.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < specs.size(); ++k) rep.modes[k] = run(specs[k]);
  } else {
    std::vector<std::future<void>> pool;
    for (int w = 0; w < jobs; ++w)
      pool.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t k = w; k < specs.size(); k += jobs) rep.modes[k] = run(specs[k]);
      }));
    for (auto& f : pool) f.get();
  }

  rep.kappa = INFINITY;
  for (const ModeReport& m : rep.modes) {
    rep.g_norm_l2 = std::max(rep.g_norm_l2, m.g_l2);
    rep.g_norm_h2 = std::max(rep.g_norm_h2, m.g_h2);
    if (m.kind == BlockKind::Coupled && m.ell >= 2) rep.kappa = std::min(rep.kappa, m.floor / (m.ell * m.ell));
  }
  rep.tail_ok = true;
  for (const ModeReport& m : rep.modes)
    if (m.kind == BlockKind::Coupled && m.ell >= 2 && m.g_l2 > 1.0 / (rep.kappa * m.ell * m.ell))
      rep.tail_ok = false;
  return rep;
}

// ---- indicial roots ---------------------------------------------------------

std::string HalfInteger::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

Eigen::Matrix3cd tangential_matrix(int ell) {
  const cplx I{0.0, 1.0};
  const Traceless alpha = 0.25 * tau(1);
  Eigen::Matrix3cd c1, c2;
  for (int k = 0; k < 3; ++k) {
    const Traceless e = hermitian_basis(k + 1);
    const Traceless once = commutator(alpha, e), twice = commutator(alpha, once);
    for (int i = 0; i < 3; ++i) {
      c1(i, k) = 0.5 * inner(once, hermitian_basis(i + 1));
      c2(i, k) = 0.5 * inner(twice, hermitian_basis(i + 1));
    }
  }
  const double l = ell;
  return -l * l * Eigen::Matrix3cd::Identity() + 2.0 * I * l * c1 + c2;
}

namespace {

using GaussInt = std::complex<long long>;

GaussInt det3(const std::array<std::array<GaussInt, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

long long round_checked(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9) throw NumericalFailure("tangential operator is not quarter-integral");
  return static_cast<long long>(r);
}

// Exact test that 4 nu^2 = q makes 4T + q singular.
bool exact_root(const Eigen::Matrix3cd& t4, long long q) {
  std::array<std::array<GaussInt, 3>, 3> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i][j] = GaussInt(round_checked(t4(i, j).real()) + (i == j ? q : 0), round_checked(t4(i, j).imag()));
  return det3(m) == GaussInt(0, 0);
}

long long exact_sqrt(long long q) {
  long long s = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(q))));
  while (s * s > q) --s;
  while ((s + 1) * (s + 1) <= q) ++s;
  return s * s == q ? s : -1;
}

}  // namespace

std::vector<HalfInteger> mode_indicial_roots(int ell) {
  const Eigen::Matrix3cd t = tangential_matrix(ell);
  const Eigen::Matrix3cd t4 = 4.0 * t;
  // i tau1 decouples from (i tau2, i tau3): scalar first, then the coupled pair.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(t.block<2, 2>(1, 1));
  std::vector<double> eig{t(0, 0).real(), es.eigenvalues()[0], es.eigenvalues()[1]};
  std::vector<HalfInteger> roots;
  for (double e : eig) {
    const long long q = std::llround(-4.0 * e);  // q = 4 nu^2 = (2 nu)^2
    if (q < 0 || !exact_root(t4, q)) throw NumericalFailure("indicial candidate failed the exact determinant test");
    const long long s = exact_sqrt(q);
    if (s < 0) throw NumericalFailure("indicial root is not a half-integer");
    roots.push_back({static_cast<int>(s)});
    roots.push_back({static_cast<int>(-s)});
  }
  return roots;
}

std::vector<IndicialRoot> indicial_roots(int ell_min, int ell_max) {
  if (ell_min > ell_max) throw std::invalid_argument("empty mode range");
  std::map<HalfInteger, int> count;
  for (int l = ell_min; l <= ell_max; ++l)
    for (const HalfInteger& h : mode_indicial_roots(l)) ++count[h];
  std::vector<IndicialRoot> out;
  for (const auto& [nu, m] : count) out.push_back({nu, m});
  return out;
}

std::vector<HalfInteger> restricted_indicial_roots(int ell_max) {
  if (ell_max < 0) throw std::invalid_argument("l_max must be nonnegative");
  // sigma(theta) = sin(theta/2) i tau2 + cos(theta/2) i tau3 must be parallel for d_theta + [tau1/4, .].
  const Traceless alpha = 0.25 * tau(1);
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * M_PI * k / 16;
    const Traceless s = std::sin(th / 2) * hermitian_basis(2) + std::cos(th / 2) * hermitian_basis(3);
    const Traceless ds = 0.5 * std::cos(th / 2) * hermitian_basis(2) - 0.5 * std::sin(th / 2) * hermitian_basis(3);
    if (frobenius_norm(ds + commutator(alpha, s)) > 1e-12)
      throw NumericalFailure("stabilizer line is not parallel");
  }
  // Anti-periodic f(theta + 2 pi) = -f(theta): modes e^{i(l + 1/2) theta}.
  std::vector<HalfInteger> out;
  for (int l = -ell_max - 1; l <= ell_max; ++l) out.push_back({2 * l + 1});
  std::sort(out.begin(), out.end());
  return out;
}

// ---- conic Poisson ------------------------------------------------------------

namespace {
void check_conic(HalfInteger nu, double delta) {
  if (nu.twice % 2 == 0) throw std::invalid_argument("mode must lie in Z + 1/2");
  if (!(delta > 0.5 && delta < 1.5)) throw std::invalid_argument("weight outside the window (1/2, 3/2)");
}

BandedSym conic_matrix(HalfInteger nu, const RadialMesh& mesh) {
  const int n = mesh.intervals();
  const double nu2 = nu.value() * nu.value();
  BandedSym k(n - 1, 1);
  for (int i = 1; i < n; ++i) {
    const int p = i - 1;
    k.at(p, p) = mesh.flux[i - 1] + mesh.flux[i] + mesh.weight[i] * nu2 / (mesh.r[i] * mesh.r[i]);
    if (p > 0) k.at(p, p - 1) = -mesh.flux[i - 1];
  }
  return k;
}
}  // namespace

ConicSolution conic_poisson_solve(HalfInteger nu, const std::vector<double>& rhs, double delta,
                                  const RadialMesh& mesh) {
  check_conic(nu, delta);
  const int n = mesh.intervals();
  if (static_cast<int>(rhs.size()) != n + 1) throw std::invalid_argument("rhs must be sampled on the mesh nodes");
  const BandedLdlt ldlt(conic_matrix(nu, mesh));
  if (!ldlt.ok() || ldlt.negative_pivots() != 0) throw NumericalFailure("conic operator is not positive");
  Eigen::VectorXd b(n - 1);
  for (int i = 1; i < n; ++i) b[i - 1] = mesh.weight[i] * rhs[i];
  const Eigen::VectorXd x = ldlt.solve(b);
  ConicSolution s;
  s.mesh = mesh;
  s.nu = nu;
  s.delta = delta;
  s.u.assign(n + 1, 0.0);
  for (int i = 1; i < n; ++i) s.u[i] = x[i - 1];
  return s;
}

ConicSolution conic_poisson_solve(HalfInteger nu, const std::function<double(double)>& rhs, double delta, int n) {
  const RadialMesh mesh = RadialMesh::graded(n);
  std::vector<double> b(n + 1, 0.0);
  for (int i = 1; i < n; ++i) b[i] = rhs(mesh.r[i]);
  return conic_poisson_solve(nu, b, delta, mesh);
}

std::vector<double> conic_apply(HalfInteger nu, const RadialMesh& mesh, const std::vector<double>& u) {
  const int n = mesh.intervals();
  if (static_cast<int>(u.size()) != n + 1) throw std::invalid_argument("u must be sampled on the mesh nodes");
  const BandedSym k = conic_matrix(nu, mesh);
  Eigen::VectorXd x(n - 1);
  for (int i = 1; i < n; ++i) x[i - 1] = u[i];
  const Eigen::VectorXd y = k.multiply(x);
  std::vector<double> out(n + 1, 0.0);
  for (int i = 1; i < n; ++i) out[i] = y[i - 1] / mesh.weight[i];
  return out;
}

LineFit decay_exponent(const ConicSolution& s, double r_lo, double r_hi) {
  std::vector<double> lx, ly;
  for (std::size_t i = 1; i + 1 < s.u.size(); ++i) {
    const double r = s.mesh.r[i];
    if (r < r_lo || r > r_hi || s.u[i] == 0.0) continue;
    lx.push_back(std::log(r));
    ly.push_back(std::log(std::abs(s.u[i])));
  }
  return fit_line(lx, ly);
}

}  // namespace hitchin
