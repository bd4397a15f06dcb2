#include "hitchin/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hitchin {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least two points");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  v.back() = b;
  return v;
}

std::vector<double> geomspace(double a, double b, int n) {
  if (!(a > 0 && b > 0)) throw std::invalid_argument("geomspace needs positive endpoints");
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& e : v) e = std::exp(e);
  v.front() = a;
  v.back() = b;
  return v;
}

std::vector<double> fornberg_weights(double z, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][m];
  return w;
}

std::vector<double> differentiate(std::span<const double> x, std::span<const double> y, int width) {
  const int n = static_cast<int>(x.size());
  if (n != static_cast<int>(y.size())) throw std::invalid_argument("size mismatch");
  width = std::min(width, n);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - width / 2, 0, n - width);
    const auto xs = x.subspan(lo, width);
    const auto w = fornberg_weights(x[i], xs, 1);
    double s = 0.0;
    for (int k = 0; k < width; ++k) s += w[k] * y[lo + k];
    d[i] = s;
  }
  return d;
}

FdStencil::FdStencil(std::span<const double> x, int width) {
  const int n = static_cast<int>(x.size());
  width_ = std::min(width, n);
  if (width_ < 2) throw std::invalid_argument("stencil needs at least two points");
  offset_.resize(n);
  weights_.resize(static_cast<std::size_t>(n) * width_);
  for (int i = 0; i < n; ++i) {
    const int lo = std::clamp(i - width_ / 2, 0, n - width_);
    offset_[i] = lo;
    const auto w = fornberg_weights(x[i], x.subspan(lo, width_), 1);
    std::copy(w.begin(), w.end(), weights_.begin() + static_cast<std::ptrdiff_t>(i) * width_);
  }
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("line fit needs >= 2 matching points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  return f;
}

double weighted_l2(std::span<const double> v, std::span<const double> w) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return std::sqrt(s);
}

}  // namespace hitchin
