#include <doctest.h>

#include <cmath>

#include "hitchin/gauge.hpp"
#include "hitchin/numerics.hpp"

using namespace hitchin;

namespace {
const painleve::PsiProfile& profile() {
  static const painleve::PsiProfile p = painleve::solve_connection();
  return p;
}
}  // namespace

TEST_SUITE("gauge") {
  TEST_CASE("finite-t orbit") {
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
      const FiducialFamily fam = build_family(t, profile());
      CHECK(verify_orbit_finite_t(fam) < 1e-7);
      CHECK(verify_orbit_finite_t(fam, 0.05, -1.0) > 1e-2);  // the wrong exponent does not match
    }
  }

  TEST_CASE("limiting orbit") { CHECK(verify_limit_orbit(default_fiducial_grid()) < 1e-8); }

  TEST_CASE("gauge action composes") {
    const PolarGrid grid(linspace(0.2, 1.0, 60), 32);
    const DiskPair base = model_pair(grid);
    DiagonalGauge a, b;
    a.r = b.r = grid.r;
    for (double r : grid.r) {
      a.u.push_back(0.3 * r * r);
      a.u_r.push_back(0.6 * r);
      b.u.push_back(std::sin(r));
      b.u_r.push_back(std::cos(r));
    }
    const DiskPair two = apply_complex_gauge(apply_complex_gauge(base, a.field(grid)), b.field(grid));
    const DiskPair one = apply_complex_gauge(base, compose(a.field(grid), b.field(grid)));
    CHECK(pair_discrepancy(one, two) < 1e-12);
  }

  TEST_CASE("ill-conditioned gauges are rejected") {
    const PolarGrid grid(linspace(0.5, 1.0, 20), 16);
    DiagonalGauge g;
    g.r = grid.r;
    g.u.assign(grid.nr(), 10.0);
    g.u_r.assign(grid.nr(), 0.0);
    CHECK_THROWS_AS(apply_complex_gauge(model_pair(grid), g.field(grid)), std::domain_error);
  }

  TEST_CASE("stabilizer normalization recovers the gauge") {
    const PolarGrid grid(linspace(0.2, 1.0, 200), 64);
    std::vector<cplx> mu0(grid.size()), mu0r(grid.size());
    for (std::size_t i = 0; i < grid.nr(); ++i)
      for (std::size_t j = 0; j < grid.nt(); ++j) {
        const double r = grid.r[i];
        const cplx a(0.3 * r * r, 0.1 * r), ar(0.6 * r, 0.1);
        const cplx e = std::polar(1.0, -grid.theta[j]);
        mu0[grid.index(i, j)] = a - std::conj(a) * e;  // unitary choice
        mu0r[grid.index(i, j)] = ar - std::conj(ar) * e;
      }
    const DiskPair lim = limiting_pair(grid);
    const DiskPair moved = apply_complex_gauge(lim, stabilizer_gauge_matrix(grid, mu0, mu0r));
    std::vector<cplx> v, w;
    offdiagonal_data(moved, v, w);
    const StabilizerGauge s = stabilizer_normalize(grid, v, w);
    double err = 0;
    for (std::size_t k = 0; k < mu0.size(); ++k) err = std::max(err, std::abs(s.mu[k] + mu0[k]));
    CHECK(err < 1e-8);
    CHECK(s.unitary);
    CHECK(pair_discrepancy(apply_complex_gauge(moved, s.field()), lim) < 1e-8);
  }

  TEST_CASE("non-flat data is rejected by the normalization") {
    const PolarGrid grid(linspace(0.2, 1.0, 100), 32);
    std::vector<cplx> v(grid.size()), w(grid.size());
    for (std::size_t i = 0; i < grid.nr(); ++i)
      for (std::size_t j = 0; j < grid.nt(); ++j) w[grid.index(i, j)] = grid.r[i];
    CHECK_THROWS_AS(stabilizer_normalize(grid, v, w), std::domain_error);
  }
}
