#pragma once
// Reference values computed independently of the library.

#include <cmath>
#include <functional>

namespace oracle {

// Composite trapezoid on [a, b]; spectrally accurate for periodic or rapidly decaying integrands.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

// K_nu(x) = int_0^inf e^{-x cosh s} cosh(nu s) ds
inline double bessel_k(int nu, double x) {
  const double top = std::acosh(1.0 + 800.0 / x);
  return trapezoid([&](double s) { return std::exp(-x * std::cosh(s)) * std::cosh(nu * s); }, 0.0, top, 4000);
}

// J_n(x) = (1/pi) int_0^pi cos(n s - x sin s) ds
inline double bessel_j(int n, double x) {
  return trapezoid([&](double s) { return std::cos(n * s - x * std::sin(s)); }, 0.0, M_PI, 400) / M_PI;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// First positive zero of J_n in [lo, hi].
inline double bessel_zero(int n, double lo, double hi) {
  return bisect([n](double x) { return bessel_j(n, x); }, lo, hi);
}

}  // namespace oracle
