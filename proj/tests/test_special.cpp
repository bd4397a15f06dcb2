#include <doctest.h>

#include <cmath>
#include <vector>

#include "hitchin/bessel.hpp"
#include "hitchin/numerics.hpp"
#include "hitchin/ode.hpp"
#include "oracles.hpp"

using namespace hitchin;

TEST_SUITE("special") {
  TEST_CASE("K0 and K1 against their integral representations") {
    for (double x : {0.05, 0.3, 1.0, 1.99, 2.01, 3.5, 8.0, 20.0, 45.0}) {
      CAPTURE(x);
      CHECK(bessel_k0(x) == doctest::Approx(oracle::bessel_k(0, x)).epsilon(1e-12));
      CHECK(bessel_k1(x) == doctest::Approx(oracle::bessel_k(1, x)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bessel_k0(0.0), std::domain_error);
  }

  TEST_CASE("K0 large-argument asymptotics") {
    const double x = 60.0;
    const double lead = std::sqrt(M_PI / (2 * x)) * std::exp(-x) * (1 - 1.0 / (8 * x) + 9.0 / (128 * x * x));
    CHECK(bessel_k0(x) == doctest::Approx(lead).epsilon(1e-6));
  }

  TEST_CASE("J0 against the Bessel integral") {
    for (double x : {0.0, 0.5, 2.404825557695773, 5.0, 10.0, 15.0})
      CHECK(std::abs(bessel_j0(x) - oracle::bessel_j(0, x)) < 1e-11);  // power series loses digits to cancellation by x = 15
  }

  TEST_CASE("finite-difference weights are exact on polynomials") {
    const std::vector<double> x{0.0, 0.1, 0.25, 0.45, 0.7};
    const auto w = fornberg_weights(0.3, x, 1);
    double d = 0;
    for (int i = 0; i < 5; ++i) d += w[i] * (x[i] * x[i] * x[i] * x[i] - 2 * x[i]);
    CHECK(d == doctest::Approx(4 * 0.027 - 2).epsilon(1e-12));
    const auto g = geomspace(1e-3, 1.0, 200);
    std::vector<double> y(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) y[i] = std::sin(g[i]);
    const auto dy = differentiate(g, y);
    const FdStencil st(g);
    const auto dy2 = st.apply(std::span<const double>(y));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(dy[i] - std::cos(g[i])) < 5e-7);
      CHECK(dy2[i] == doctest::Approx(dy[i]).epsilon(1e-14));
    }
  }

  TEST_CASE("line fit and weighted norm") {
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(weighted_l2(std::vector<double>{3, 4}, std::vector<double>{1, 1}) == doctest::Approx(5.0));
  }

  TEST_CASE("DOPRI integrates a harmonic oscillator") {
    OdeOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = 1e-12;
    const State2 y = integrate_dopri([](double, const State2& v) { return State2(v[1], -v[0]); }, 0.0,
                                     State2(0.0, 1.0), 10.0, o);
    CHECK(y[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-9));
    CHECK(y[1] == doctest::Approx(std::cos(10.0)).epsilon(1e-9));
  }
}
