#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hitchin/fiducial.hpp"
#include "hitchin/numerics.hpp"

using namespace hitchin;

namespace {
const painleve::PsiProfile& profile() {
  static const painleve::PsiProfile p = painleve::solve_connection();
  return p;
}
}  // namespace

TEST_SUITE("fiducial") {
  TEST_CASE("fiducial pair solves the rescaled equations") {
    for (double t : {1.0, 8.0}) {
      CAPTURE(t);
      const FiducialFamily fam = build_family(t, profile());
      const DiskPair pair = fiducial_pair(fam);
      const HitchinResidual res = hitchin_residual(pair, t, 1e-3);
      CHECK(res.max() < 1e-6);
      CHECK(res.holomorphic_max < 1e-10);
      CHECK(determinant_defect(pair) < 1e-12);
      CHECK(reduced_residual(fam) < 1e-6);
      CHECK(painleve_residual(fam) < 1e-6);
    }
  }

  TEST_CASE("f_t = eta(rho) and f' = 2 t^2 r^2 sinh 2h by differencing") {
    const double t = 2.0;
    const auto r = geomspace(1e-2, 1.0, 3000);
    const FiducialFamily fam = build_family(t, profile(), r);
    const auto df = differentiate(fam.r, fam.f, 5);
    for (std::size_t i = 5; i + 5 < r.size(); i += 101) {
      const double rho = 8.0 / 3 * t * std::pow(r[i], 1.5);
      CHECK(fam.f[i] == doctest::Approx(painleve::eta(profile(), rho)).epsilon(1e-12));
      CHECK(df[i] == doctest::Approx(2 * t * t * r[i] * r[i] * std::sinh(2 * fam.h[i])).epsilon(1e-5));
      CHECK(fam.df[i] == doctest::Approx(df[i]).epsilon(1e-5));
    }
  }

  TEST_CASE("h_t ~ -1/2 log r + b0 near 0") {
    const double t = 4.0;
    const FiducialValue v = fiducial_at(profile(), t, 1e-9);
    CHECK(v.h + 0.5 * std::log(1e-9) == doctest::Approx(painleve::small_r_constant(profile(), t)).epsilon(1e-8));
    const double b0 = -std::log(8 * t / 3) / 3 - std::log(profile().a0);
    CHECK(painleve::small_r_constant(profile(), t) == doctest::Approx(b0));
  }

  TEST_CASE("f bounds and uniform normalization") {
    double lo1 = 1e9, hi1 = 0, lo2 = 1e9, hi2 = 0, plo = 1e9, phi_hi = 0;
    for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const FiducialFamily fam = build_family(t, profile());
      const FBounds b = verify_f_bounds(fam);
      CHECK(b.f_in_range);
      CHECK(b.f_monotone);
      lo1 = std::min(lo1, b.normalized_r);
      hi1 = std::max(hi1, b.normalized_r);
      lo2 = std::min(lo2, b.normalized_r2);
      hi2 = std::max(hi2, b.normalized_r2);
      const double p = phi_sup_bound(fam);
      plo = std::min(plo, p);
      phi_hi = std::max(phi_hi, p);
    }
    CHECK(hi1 / lo1 < 3.0);
    CHECK(hi2 / lo2 < 3.0);
    CHECK(phi_hi / plo < 1.5);
  }

  TEST_CASE("limiting pair solves the decoupled equations") {
    const DiskPair lim = limiting_pair(PolarGrid(default_fiducial_grid(), 64));
    const HitchinResidual res = hitchin_residual(lim, 1.0, 1e-3);
    CHECK(res.curvature_max < 1e-8);
    CHECK(res.commutator_max < 1e-12);
    CHECK(res.holomorphic_max < 1e-9);
    CHECK(determinant_defect(lim) < 1e-13);
  }

  TEST_CASE("convergence to the limiting configuration is exponential") {
    const std::vector<double> ts{2, 4, 6, 8};
    const RateFit f = convergence_rate(profile(), ts, 0.5);
    CHECK(f.delta > 0.5);
    CHECK(f.r2 > 0.98);
    // larger r0 decays faster
    CHECK(convergence_rate(profile(), ts, 0.8).delta > f.delta);
  }

  TEST_CASE("decay rate follows rho = (8/3) t r^{3/2}") {
    const std::vector<double> ts{4, 6, 8, 10, 12, 14, 16};
    const double predicted = 8.0 / 3.0 * std::pow(0.5, 1.5);
    const RateFit half = convergence_rate(profile(), ts, 0.5);
    CHECK(std::abs(half.delta - predicted) < 0.2 * predicted);
    const RateFit quarter = convergence_rate(profile(), ts, 0.25);
    CHECK(half.delta / quarter.delta == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.1));
  }

  TEST_CASE("csv") {
    std::ostringstream s;
    write_family_csv(build_family(1.0, profile()), s);
    CHECK(s.str().rfind("r,h,f,df,residual\n", 0) == 0);
  }
}
