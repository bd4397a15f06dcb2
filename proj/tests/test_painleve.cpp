#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hitchin/bessel.hpp"
#include "hitchin/numerics.hpp"
#include "hitchin/painleve.hpp"

using namespace hitchin;
using namespace hitchin::painleve;

namespace {
const PsiProfile& profile() {
  static const PsiProfile p = solve_connection();
  return p;
}
}  // namespace

TEST_SUITE("painleve") {
  TEST_CASE("profile solves the ODE and has the expected shape") {
    const PsiProfile& p = profile();
    CHECK(p.rho_min() == doctest::Approx(1e-4));
    CHECK(p.rho_max() == doctest::Approx(40.0));
    CHECK(ode_residual(p) < 1e-8);
    for (std::size_t i = 0; i < p.psi.size(); ++i) {
      CHECK(p.psi[i] > 0);
      if (i) CHECK(p.psi[i] < p.psi[i - 1]);
    }
    const EtaProfile e = eta_profile(p);
    for (std::size_t i = 0; i < e.eta.size(); ++i) {
      CHECK(e.eta[i] >= 0.0);
      CHECK(e.eta[i] <= 0.125);
      if (i) CHECK(e.eta[i] >= e.eta[i - 1]);
    }
    CHECK(std::abs(eta(p, 40.0) - 0.125) < 1e-6);
  }

  TEST_CASE("connection constants match the known closed forms") {
    // a0 = Gamma(1/3) / (2 Gamma(2/3)) and the K0 amplitude 1/pi.
    const PsiProfile& p = profile();
    CHECK(p.a0 == doctest::Approx(std::tgamma(1.0 / 3) / (2 * std::tgamma(2.0 / 3))).epsilon(1e-9));
    CHECK(p.lambda == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
  }

  TEST_CASE("eta' = 3/16 rho sinh 2psi by differencing the eta samples") {
    const PsiProfile& p = profile();
    const EtaProfile e = eta_profile(p);
    const auto d = differentiate(e.rho, e.eta, 5);
    for (std::size_t i = 10; i + 10 < d.size(); i += 37) {
      const double expect = 3.0 / 16 * p.rho[i] * std::sinh(2 * p.psi[i]);
      CHECK(d[i] == doctest::Approx(expect).epsilon(1e-6));
    }
  }

  TEST_CASE("small-rho series satisfies the ODE") {
    const PsiProfile& p = profile();
    for (double rho : {1e-6, 1e-4, 1e-3}) {
      // Richardson-extrapolated second difference of psi in x = log rho
      auto psi = [&](double x) { return small_rho_series(p.a0, 3, std::exp(x), 1e-14).psi; };
      const double x = std::log(rho);
      auto d2 = [&](double h) { return (psi(x + h) - 2 * psi(x) + psi(x - h)) / (h * h); };
      const double pxx = (4 * d2(0.01) - d2(0.02)) / 3;
      CHECK(pxx == doctest::Approx(ode_rhs(rho, psi(x))).epsilon(1e-4).scale(1e-6));
    }
    const auto c = series_coefficients(1.0, 3);
    CHECK(c[0] == 1.0);
  }

  TEST_CASE("tail is lambda K0 far out") {
    const PsiProfile& p = profile();
    for (double rho : {20.0, 30.0, 39.0}) {
      const double psi = psi_eval(p, rho).psi;
      CHECK(psi == doctest::Approx(p.lambda * bessel_k0(rho)).epsilon(1e-6));
    }
    CHECK(tail(p.lambda, 50.0).psi == doctest::Approx(p.lambda * bessel_k0(50.0)));
  }

  TEST_CASE("evaluation range") {
    const PsiProfile& p = profile();
    CHECK_THROWS_AS(psi_eval(p, 1e-6), std::domain_error);
    CHECK_THROWS_AS(psi_eval(p, 0.0, Extension::SmallRhoSeries), std::domain_error);
    CHECK_THROWS_AS(psi_eval(p, 100.0), std::domain_error);
    const double s = psi_eval(p, 1e-6, Extension::SmallRhoSeries).psi;
    CHECK(s == doctest::Approx(small_rho_series(p.a0, 3, 1e-6).psi));
    // interpolation reproduces the nodes
    CHECK(psi_eval(p, p.rho[1234]).psi == doctest::Approx(p.psi[1234]).epsilon(1e-14));
  }

  TEST_CASE("small-r constant of h_t") {
    const PsiProfile& p = profile();
    const double t = 3.0, r = 1e-10;
    const double rho = 8.0 / 3 * t * std::pow(r, 1.5);
    const double h = psi_eval(p, rho, Extension::SmallRhoSeries).psi;
    CHECK(h + 0.5 * std::log(r) == doctest::Approx(small_r_constant(p, t)).epsilon(1e-8));
  }

  TEST_CASE("csv output") {
    std::ostringstream s;
    write_csv(profile(), s);
    const std::string out = s.str();
    CHECK(out.rfind("rho,psi,dpsi,eta\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == static_cast<long>(profile().rho.size()) + 1);
  }

  TEST_CASE("deterministic") {
    const PsiProfile q = solve_connection();
    CHECK(q.a0 == profile().a0);
    CHECK(q.psi == profile().psi);
  }
}
