#include "hitchin/algebra.hpp"

#include <cmath>

namespace hitchin {

namespace {
constexpr cplx I{0.0, 1.0};
}

Traceless tau(int k) {
  switch (k) {
    case 1: return {I, 0.0, 0.0};
    case 2: return {0.0, 1.0, -1.0};
    case 3: return {0.0, I, I};
    default: throw std::out_of_range("tau index must be 1, 2 or 3");
  }
}

Traceless hermitian_basis(int k) { return I * tau(k); }

Traceless HermitianDecomposition::reconstruct() const {
  Traceless g;
  for (int k = 0; k < 3; ++k) g += coeffs[k] * hermitian_basis(k + 1);
  return g;
}

HermitianDecomposition HermitianDecomposition::of(const Traceless& gamma, double tol) {
  const Traceless skew = gamma - gamma.adjoint();
  if (frobenius_norm(skew) > tol * std::max(1.0, frobenius_norm(gamma)))
    throw std::domain_error("matrix is not Hermitian");
  HermitianDecomposition d;
  for (int k = 0; k < 3; ++k) d.coeffs[k] = 0.5 * inner(gamma, hermitian_basis(k + 1)).real();
  return d;
}

Traceless commutator(const Traceless& x, const Traceless& y) {
  // [x,y] for trace-free 2x2 matrices, written out in (a,b,c).
  return {x.b * y.c - x.c * y.b,
          2.0 * (x.a * y.b - x.b * y.a),
          2.0 * (x.c * y.a - x.a * y.c),
          y.role};
}

cplx inner(const Traceless& x, const Traceless& y) {
  return 2.0 * x.a * std::conj(y.a) + x.b * std::conj(y.b) + x.c * std::conj(y.c);
}

double frobenius_norm(const Traceless& x) {
  return std::sqrt(2.0 * std::norm(x.a) + std::norm(x.b) + std::norm(x.c));
}

Traceless m_phi_apply(const Traceless& phi, const Traceless& gamma) {
  const Traceless phis = phi.adjoint();
  return 2.0 * (commutator(phis, commutator(phi, gamma)) + commutator(phi, commutator(phis, gamma)));
}

Eigen::Matrix3d m_phi_matrix(const Traceless& phi) {
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j) {
    const Traceless col = m_phi_apply(phi, hermitian_basis(j + 1));
    for (int i = 0; i < 3; ++i) m(i, j) = 0.5 * inner(col, hermitian_basis(i + 1)).real();
  }
  return m;
}

int m_phi_kernel_dimension(const Traceless& phi, double tol) {
  const Eigen::Matrix3d m = m_phi_matrix(phi);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
  const double cutoff = tol * std::max(1.0, m.norm());
  int dim = 0;
  for (int i = 0; i < 3; ++i)
    if (std::abs(es.eigenvalues()[i]) <= cutoff) ++dim;
  return dim;
}

Traceless conjugate(const Mat2c& g, const Traceless& x) {
  const Mat2c m = g.inverse() * x.matrix() * g;
  return Traceless::from_matrix(m, 1e-8, x.role);
}

NormalFormGauge::NormalFormGauge(Field phi) : phi_(std::move(phi)) {}

Mat2c NormalFormGauge::operator()(cplx z) const {
  const Traceless p = phi_(z);
  const cplx s = 1.0 / std::sqrt(p.b);
  Mat2c g;
  g << s * p.b, 0.0, -s * p.a, s;
  return g;
}

Traceless NormalFormGauge::conjugated(cplx z) const {
  Traceless out = conjugate((*this)(z), phi_(z));
  out.role = MatrixRole::HiggsCoefficient;
  return out;
}

NormalFormGauge normal_form_at_zero(NormalFormGauge::Field phi, double tol) {
  const Traceless p0 = phi(0.0);
  const double scale = frobenius_norm(p0);
  if (scale <= tol) throw std::domain_error("phi(0) vanishes: zero of det phi is not simple");
  const cplx det0 = -(p0.a * p0.a + p0.b * p0.c);
  if (std::abs(det0) > tol * std::max(1.0, scale * scale))
    throw std::domain_error("phi(0) is not nilpotent: 0 is not a zero of det phi");
  if (std::abs(p0.b) <= tol * scale)
    throw std::domain_error("b(0) = 0: apply a constant conjugation to move the zero into position");

  // d(det phi)/dz at 0 by a central difference on a small circle.
  const double h = 1e-5;
  auto det = [&](cplx z) {
    const Traceless p = phi(z);
    return -(p.a * p.a + p.b * p.c);
  };
  const cplx ddet = (det(h) - det(-h)) / (2.0 * h);
  if (std::abs(ddet) <= 1e3 * h * h * std::max(1.0, scale * scale))
    throw std::domain_error("det phi has a multiple zero at 0");
  return NormalFormGauge(std::move(phi));
}

}  // namespace hitchin
