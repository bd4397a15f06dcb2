#pragma once

namespace hitchin {

/// Macdonald functions K0, K1 for x > 0: power series for x <= 2,
/// Steed/Temme continued fraction above. Throws std::domain_error for x <= 0.
double bessel_k0(double x);
double bessel_k1(double x);

/// Regular Bessel function of the first kind J0 (power series; intended for |x| <= 20).
double bessel_j0(double x);

}  // namespace hitchin
