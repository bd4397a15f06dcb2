#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

namespace hitchin {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

enum class MatrixRole { HiggsCoefficient, GaugeAlgebra, GaugeGroupLog };

/// Trace-free 2x2 matrix [[a, b], [c, -a]]. The (2,2) entry is never stored,
/// so the trace vanishes exactly.
template <typename Scalar>
struct TracelessMatrix {
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;

  Scalar a{0}, b{0}, c{0};
  MatrixRole role = MatrixRole::GaugeAlgebra;

  TracelessMatrix() = default;
  TracelessMatrix(Scalar a_, Scalar b_, Scalar c_, MatrixRole r = MatrixRole::GaugeAlgebra)
      : a(a_), b(b_), c(c_), role(r) {}

  Matrix matrix() const {
    Matrix m;
    m << a, b, c, -a;
    return m;
  }

  /// Projects out the trace; throws if the trace exceeds `tol` relative to the entries.
  static TracelessMatrix from_matrix(const Matrix& m, double tol = 1e-9,
                                     MatrixRole r = MatrixRole::GaugeAlgebra) {
    const Scalar tr = m(0, 0) + m(1, 1);
    const double scale = std::max(1.0, static_cast<double>(m.norm()));
    if (std::abs(tr) > tol * scale) throw std::domain_error("matrix is not trace-free");
    return {(m(0, 0) - m(1, 1)) / Scalar(2), m(0, 1), m(1, 0), r};
  }

  TracelessMatrix adjoint() const {
    using std::conj;
    return {conj(a), conj(c), conj(b), role};
  }

  TracelessMatrix& operator+=(const TracelessMatrix& o) {
    a += o.a; b += o.b; c += o.c;
    return *this;
  }
  TracelessMatrix& operator-=(const TracelessMatrix& o) {
    a -= o.a; b -= o.b; c -= o.c;
    return *this;
  }
  TracelessMatrix& operator*=(Scalar s) {
    a *= s; b *= s; c *= s;
    return *this;
  }

  friend TracelessMatrix operator+(TracelessMatrix x, const TracelessMatrix& y) { return x += y; }
  friend TracelessMatrix operator-(TracelessMatrix x, const TracelessMatrix& y) { return x -= y; }
  friend TracelessMatrix operator-(TracelessMatrix x) { return x *= Scalar(-1); }
  friend TracelessMatrix operator*(Scalar s, TracelessMatrix x) { return x *= s; }
  friend TracelessMatrix operator*(TracelessMatrix x, Scalar s) { return x *= s; }
};

using Traceless = TracelessMatrix<cplx>;

/// Standard basis of su(2): tau1 = diag(i,-i), tau2 = [[0,1],[-1,0]], tau3 = [[0,i],[i,0]].
Traceless tau(int k);

/// Coefficients of gamma = i g1 tau1 + i g2 tau2 + i g3 tau3 (Hermitian trace-free).
struct HermitianDecomposition {
  Eigen::Vector3d coeffs = Eigen::Vector3d::Zero();

  Traceless reconstruct() const;
  /// Throws if `gamma` has an anti-Hermitian part above `tol`.
  static HermitianDecomposition of(const Traceless& gamma, double tol = 1e-10);
};

/// Basis element i tau_k of i su(2), k in {1,2,3}.
Traceless hermitian_basis(int k);

Traceless commutator(const Traceless& x, const Traceless& y);

/// tr(A B^*)
cplx inner(const Traceless& x, const Traceless& y);
double frobenius_norm(const Traceless& x);

/// M_phi gamma = 2([phi^*, [phi, gamma]] + [phi, [phi^*, gamma]]).
Traceless m_phi_apply(const Traceless& phi, const Traceless& gamma);

/// M_phi as a real-symmetric 3x3 matrix in the basis (i tau1, i tau2, i tau3).
Eigen::Matrix3d m_phi_matrix(const Traceless& phi);

/// Dimension of ker M_phi on i su(2); eigenvalues below tol * max(1, |M_phi|) count as zero.
int m_phi_kernel_dimension(const Traceless& phi, double tol = 1e-9);

/// g^{-1} x g for invertible g.
Traceless conjugate(const Mat2c& g, const Traceless& x);

/// Local gauge bringing a holomorphic phi with a simple zero of det phi at 0
/// into the form [[0,1],[-det phi(z), 0]]:  g = b^{-1/2} [[b, 0], [-a, 1]].
/// Principal branch of the square root; b must not vanish on the sampled disc.
class NormalFormGauge {
 public:
  using Field = std::function<Traceless(cplx)>;

  explicit NormalFormGauge(Field phi);

  Mat2c operator()(cplx z) const;
  /// g(z)^{-1} phi(z) g(z)
  Traceless conjugated(cplx z) const;

 private:
  Field phi_;
};

/// Checks the preconditions at 0 (nilpotent nonzero phi(0), b(0) != 0, simple zero of det)
/// and returns the gauge. Throws std::domain_error when b(0) vanishes: the caller must
/// apply a constant conjugation first.
NormalFormGauge normal_form_at_zero(NormalFormGauge::Field phi, double tol = 1e-10);

}  // namespace hitchin
