#include "hitchin/ode.hpp"

#include <algorithm>
#include <cmath>

#include "hitchin/errors.hpp"

namespace hitchin {

State2 integrate_dopri(const Rhs2& f, double x0, const State2& y0, double x1, const OdeOptions& opt,
                       OdeStats* stats) {
  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  State2 y = y0;
  double x = x0;
  const double span = x1 - x0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = dir * std::min(std::abs(span), opt.initial_step);
  State2 k1 = f(x, y);

  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (x + h - x1) > 0) h = x1 - x;
    const State2 k2 = f(x + c2 * h, y + h * a21 * k1);
    const State2 k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const State2 k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const State2 k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State2 k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State2 ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State2 k7 = f(x + h, ynew);
    const State2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      en = std::max(en, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;
      if (stats) ++stats->accepted;
      if (dir * (x - x1) >= 0) return y;
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      if (stats) ++stats->rejected;
      h *= std::max(0.1, 0.9 * std::pow(en, -0.25));
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
      throw NumericalFailure("ODE step size underflow at x = " + std::to_string(x));
  }
  throw NumericalFailure("ODE step budget exhausted");
}

}  // namespace hitchin
