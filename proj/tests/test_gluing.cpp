#include <doctest.h>

#include <cmath>
#include <random>

#include "hitchin/errors.hpp"
#include "hitchin/gluing.hpp"

using namespace hitchin;

namespace {
const painleve::PsiProfile& profile() {
  static const painleve::PsiProfile p = painleve::solve_connection();
  return p;
}
}  // namespace

TEST_SUITE("gluing") {
  TEST_CASE("cutoff is a smooth step from 1 to 0") {
    const CutoffProfile c;
    CHECK(c.at(0.3).chi == 1.0);
    CHECK(c.at(0.55).chi == 1.0);
    CHECK(c.at(0.9).chi == 0.0);
    CHECK(c.at(0.95).chi == 0.0);
    double prev = 1.0;
    for (double r = 0.55; r <= 0.9; r += 0.005) {
      const double chi = c.at(r).chi;
      CHECK(chi <= prev + 1e-15);
      prev = chi;
    }
    const double h = 1e-5;
    for (double r : {0.6, 0.7, 0.8, 0.85}) {
      const CutoffValue v = c.at(r);
      CHECK(v.dchi == doctest::Approx((c.at(r + h).chi - c.at(r - h).chi) / (2 * h)).epsilon(1e-7));
      CHECK(v.d2chi == doctest::Approx((c.at(r + h).dchi - c.at(r - h).dchi) / (2 * h)).epsilon(1e-6));
    }
    CHECK(CutoffProfile::none().identity());
    CHECK(CutoffProfile::none().at(0.99).chi == 1.0);
  }

  TEST_CASE("glued data is exact inside and flat outside") {
    const GluedState s = build_glued(4.0, profile());
    for (int i = 1; i < s.size(); ++i) {
      const double r = s.mesh.r[i];
      if (r <= 0.5) CHECK(std::abs(s.residual[i]) < 1e-6);
      if (r >= 0.9) {
        CHECK(s.residual[i] == 0.0);
        CHECK(s.h_chi[i] == 0.0);
        CHECK(s.f_chi[i] == 0.125);
      }
    }
    CHECK(s.residual_sup() > 0);
    CHECK_THROWS_AS(build_glued(0.0, profile()), std::invalid_argument);
    CHECK_THROWS_AS(build_glued(1.0, profile(), CutoffProfile{0.4, 0.9}), std::invalid_argument);
    CHECK_THROWS_AS(build_glued(1.0, profile(), CutoffProfile{0.8, 0.7}), std::invalid_argument);
  }

  TEST_CASE("approximation error decays exponentially in t") {
    const std::vector<double> ts{2, 3, 4, 5, 6, 7, 8};
    const ErrorSweep a = approx_error_sweep(ts, profile(), {}, 2000, 2);
    CHECK(a.r2 > 0.98);
    CHECK(a.delta > 0);
    for (std::size_t i = 1; i < ts.size(); ++i) {
      CHECK(a.l2[i] < a.l2[i - 1]);
      CHECK(a.sup[i] < a.sup[i - 1]);
    }
    // a later onset leaves more of the tail to cut off
    const ErrorSweep b = approx_error_sweep(ts, profile(), CutoffProfile{0.7, 0.9}, 2000, 2);
    CHECK(a.delta < b.delta);
    const std::vector<double> few{2, 3, 3};
    CHECK_THROWS(approx_error_sweep(few, profile()));
  }

  TEST_CASE("Jacobian without a cutoff is the scalar l = 0 block of the fiducial solution") {
    const double t = 2.0;
    const GluedState s = build_glued(t, profile(), CutoffProfile::none(), 400);
    const std::vector<double> zero(s.mesh.r.size(), 0.0);
    const BandedSym jac = newton_jacobian(s, zero);
    BlockSpec spec;
    spec.kind = BlockKind::Scalar;
    spec.ell = 0;
    spec.t = t;
    const RadialOperator op = assemble_block(spec, fiducial_background(profile(), t), s.mesh);
    REQUIRE(op.size() == jac.size());
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(op.size());
    for (int i = 0; i < v.size(); ++i) v[i] = nd(rng);
    const Eigen::VectorXd a = jac.multiply(v), b = op.stiffness.multiply(v);
    CHECK((a - b).norm() <= 1e-10 * a.norm());
  }

  TEST_CASE("discrete residual derivative matches minus the Jacobian") {
    const GluedState s = build_glued(2.0, profile(), {}, 300);
    const int n = s.mesh.intervals();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
      u[i] = 0.01 * std::cos(3.0 * s.mesh.r[i]);
      v[i] = std::sin(5.0 * s.mesh.r[i]) + 0.5;
    }
    const double eps = 1e-6;
    std::vector<double> up(u), um(u);
    for (int i = 0; i < n; ++i) {
      up[i] += eps * v[i];
      um[i] -= eps * v[i];
    }
    const Eigen::VectorXd fd = (newton_residual(s, up) - newton_residual(s, um)) / (2 * eps);
    const Eigen::VectorXd jv = newton_jacobian(s, u).multiply(Eigen::Map<const Eigen::VectorXd>(v.data(), n));
    CHECK((fd + jv).norm() <= 1e-6 * jv.norm());
  }

  TEST_CASE("Newton correction converges quadratically to a small correction") {
    std::vector<double> sup_u;
    for (double t : {2.0, 4.0, 8.0}) {
      CAPTURE(t);
      const GluedState s = build_glued(t, profile());
      const NewtonResult res = newton_correct(s);
      const CorrectionReport rep = corrected_solution_check(s, res);
      CHECK(rep.residual_post < 1e-9);
      CHECK(rep.residual_post_l2 < 1e-11);
      CHECK(rep.residual_pre > rep.residual_post);
      CHECK(rep.sup_u <= rep.apriori_bound);
      CHECK(rep.g_norm > 0);
      if (t < 8.0) CHECK(rep.quadratic_pairs > 0);
      CHECK(rep.quadratic_constant < 1.0);
      sup_u.push_back(rep.sup_u);
      if (t == 8.0) CHECK(rep.interior_deviation < 1e-10);
    }
    CHECK(sup_u[1] < sup_u[0]);
    CHECK(sup_u[2] < sup_u[1]);
  }

  TEST_CASE("identity cutoff needs no correction") {
    const GluedState s = build_glued(4.0, profile(), CutoffProfile::none(), 1000);
    const NewtonResult res = newton_correct(s, {1e-6, 30});
    CHECK(res.iterations == 0);
    for (double x : res.u) CHECK(x == 0.0);
  }

  TEST_CASE("Newton reports failure with its history") {
    const GluedState s = build_glued(2.0, profile(), {}, 400);
    try {
      newton_correct(s, {1e-30, 5});
      FAIL("expected NumericalFailure");
    } catch (const NumericalFailure& e) {
      CHECK(!e.history.empty());
    }
    CHECK_THROWS_AS(newton_correct(s, {0.0, 5}), std::invalid_argument);
  }

  TEST_CASE("glued f stays in [0, 1/8] with bounded t^-1 sup|f'|") {
    const std::vector<double> ts{1, 2, 4, 8, 16};
    const GrowthReport g = growth_norm_check(ts, profile());
    CHECK(g.f_min >= 0);
    CHECK(g.f_max <= 0.125 + 1e-15);
    for (double x : g.sup_df_over_t) CHECK(x <= 1.0);
    for (std::size_t i = 2; i < ts.size(); ++i) CHECK(g.sup_df_over_t[i] < g.sup_df_over_t[i - 1]);
  }

  TEST_CASE("Neumann linearization is positive") {
    CHECK(neumann_lambda_min(profile(), 4.0) > 0);
  }
}
