#include <doctest.h>

#include <random>

#include "hitchin/algebra.hpp"

using namespace hitchin;

namespace {

Mat2c m(const Traceless& x) { return x.matrix(); }

// M_phi written out with plain matrix products.
Mat2c m_phi_oracle(const Mat2c& phi, const Mat2c& g) {
  const Mat2c ps = phi.adjoint();
  auto br = [](const Mat2c& a, const Mat2c& b) -> Mat2c { return a * b - b * a; };
  return 2.0 * (br(ps, br(phi, g)) + br(phi, br(ps, g)));
}

Traceless random_traceless(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
}

Traceless random_hermitian(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const double x = n(rng), y = n(rng), z = n(rng);
  return x * hermitian_basis(1) + y * hermitian_basis(2) + z * hermitian_basis(3);
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("su(2) basis relations") {
    for (int k = 1; k <= 3; ++k) {
      CHECK((m(tau(k)) + m(tau(k)).adjoint()).norm() == doctest::Approx(0.0));
      CHECK((m(tau(k)) * m(tau(k)) + Mat2c::Identity()).norm() < 1e-15);
    }
    CHECK((m(commutator(tau(1), tau(2))) - 2.0 * m(tau(3))).norm() < 1e-15);
    CHECK((m(commutator(tau(2), tau(3))) - 2.0 * m(tau(1))).norm() < 1e-15);
    CHECK((m(commutator(tau(3), tau(1))) - 2.0 * m(tau(2))).norm() < 1e-15);
  }

  TEST_CASE("arithmetic agrees with dense matrices") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      const Traceless x = random_traceless(rng), y = random_traceless(rng);
      CHECK((m(commutator(x, y)) - (m(x) * m(y) - m(y) * m(x))).norm() < 1e-13);
      CHECK(std::abs(inner(x, y) - (m(x) * m(y).adjoint()).trace()) < 1e-13);
      CHECK((m(x.adjoint()) - m(x).adjoint()).norm() == 0.0);
      CHECK((m(x + 2.0 * y) - (m(x) + 2.0 * m(y))).norm() < 1e-14);
    }
  }

  TEST_CASE("from_matrix rejects a trace") {
    Mat2c a;
    a << 1.0, 2.0, 3.0, -1.0;
    CHECK(Traceless::from_matrix(a).a == cplx(1.0));
    a(1, 1) = 0.0;
    CHECK_THROWS_AS(Traceless::from_matrix(a), std::domain_error);
  }

  TEST_CASE("Hermitian decomposition round trip") {
    std::mt19937_64 rng(3);
    const Traceless g = random_hermitian(rng);
    const auto d = HermitianDecomposition::of(g);
    CHECK((m(d.reconstruct()) - m(g)).norm() < 1e-14);
    CHECK_THROWS(HermitianDecomposition::of(tau(1)));
  }

  TEST_CASE("M_phi against the expanded double commutator") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
      const Traceless phi = random_traceless(rng), g = random_hermitian(rng);
      CHECK((m(m_phi_apply(phi, g)) - m_phi_oracle(m(phi), m(g))).norm() < 1e-12);
    }
  }

  TEST_CASE("M_phi matrix is symmetric, nonnegative and matches the action") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
      const Traceless phi = random_traceless(rng);
      const Eigen::Matrix3d mm = m_phi_matrix(phi);
      CHECK((mm - mm.transpose()).norm() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(mm);
      CHECK(es.eigenvalues().minCoeff() > -1e-12 * es.eigenvalues().maxCoeff());
      const Eigen::Vector3d c = Eigen::Vector3d::Random();
      Traceless g;
      for (int k = 0; k < 3; ++k) g += c[k] * hermitian_basis(k + 1);
      const Eigen::Vector3d out = HermitianDecomposition::of(m_phi_apply(phi, g), 1e-9).coeffs;
      CHECK((out - mm * c).norm() < 1e-11 * (1.0 + out.norm()));
    }
  }

  TEST_CASE("quadratic form identity") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
      const Traceless phi = random_traceless(rng), g = random_hermitian(rng);
      const double lhs = inner(m_phi_apply(phi, g), g).real();
      const double br = frobenius_norm(commutator(phi, g));
      CHECK(std::abs(lhs - 4.0 * br * br) < 1e-12 * std::max(1.0, lhs));
    }
  }

  TEST_CASE("kernel dimension trichotomy") {
    CHECK(m_phi_kernel_dimension(Traceless{}) == 3);
    CHECK(m_phi_kernel_dimension(Traceless{cplx(1.5, 0.2), 0.0, 0.0}) == 1);                // normal
    CHECK(m_phi_kernel_dimension(Traceless{0.0, cplx(0.0, 2.0), cplx(2.0, 0.0)}) == 1);     // normal, off-diagonal
    CHECK(m_phi_kernel_dimension(Traceless{0.0, 1.0, 0.0}) == 0);                           // nilpotent
    CHECK(m_phi_kernel_dimension(Traceless{1.0, 3.0, 0.0}) == 0);                           // diagonalizable, not normal
  }

  TEST_CASE("normal form at a simple zero") {
    // det phi = -a^2 - b c = -z
    auto phi = [](cplx z) {
      const cplx a = 0.3 * z, b = 1.0 + 0.5 * z;
      return Traceless{a, b, (z - a * a) / b, MatrixRole::HiggsCoefficient};
    };
    const NormalFormGauge g = normal_form_at_zero(phi);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.3, 0.05), cplx(0.0, -0.4)}) {
      Mat2c expect;
      expect << 0.0, 1.0, z, 0.0;
      CHECK((g.conjugated(z).matrix() - expect).norm() < 1e-12);
      CHECK((g(z).inverse() * phi(z).matrix() * g(z) - expect).norm() < 1e-12);
    }
    CHECK_THROWS_AS(normal_form_at_zero([](cplx z) { return Traceless{0.0, z, 1.0}; }), std::domain_error);
  }
}
