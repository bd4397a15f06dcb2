#include "hitchin/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hitchin {

namespace {

constexpr double kEuler = 0.57721566490153286061;
constexpr double kEps = 1e-16;

// A&S 9.6.13 and 9.6.11 summed together.
std::pair<double, double> k01_series(double x) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);

  double term = 1.0;  // (x^2/4)^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 0.0, k0_tail = 0.0;
  double i1 = 0.0, k1_tail = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= q / (double(k) * double(k));
      harmonic += 1.0 / k;
    }
    i0 += term;
    k0_tail += term * harmonic;
    // (x^2/4)^k / (k!(k+1)!) = term / (k+1)
    const double t1 = term / (k + 1);
    i1 += t1;
    // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
    k1_tail += t1 * (-2.0 * kEuler + 2.0 * harmonic + 1.0 / (k + 1));
    if (term < kEps * i0 && k > 2) break;
  }
  i1 *= 0.5 * x;
  const double k0 = -(lg + kEuler) * i0 + k0_tail;
  const double k1 = 1.0 / x + lg * i1 - 0.25 * x * k1_tail;
  return {k0, k1};
}

// Steed's CF2 (Temme's normalization) for K_0 and K_1, x >= 2.
std::pair<double, double> k01_continued_fraction(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

std::pair<double, double> k01(double x) {
  if (!(x > 0.0)) throw std::domain_error("Macdonald function requires x > 0");
  return x <= 2.0 ? k01_series(x) : k01_continued_fraction(x);
}

}  // namespace

double bessel_k0(double x) { return k01(x).first; }
double bessel_k1(double x) { return k01(x).second; }

double bessel_j0(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * double(k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

}  // namespace hitchin
