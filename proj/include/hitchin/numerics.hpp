#pragma once

#include <span>
#include <vector>

namespace hitchin {

std::vector<double> linspace(double a, double b, int n);
/// n points from a to b (both > 0), equally spaced in log.
std::vector<double> geomspace(double a, double b, int n);

/// Fornberg weights for the m-th derivative at z from the nodes x.
std::vector<double> fornberg_weights(double z, std::span<const double> x, int m);

/// First derivative of samples y(x) on an arbitrary increasing grid using
/// `width`-point stencils (centred in the interior, shifted at the ends).
std::vector<double> differentiate(std::span<const double> x, std::span<const double> y, int width = 5);

/// Precomputed first-derivative stencils on a fixed grid; apply() works for real or complex samples.
class FdStencil {
 public:
  FdStencil(std::span<const double> x, int width = 5);

  template <typename T>
  std::vector<T> apply(std::span<const T> y) const {
    std::vector<T> d(offset_.size(), T{});
    for (std::size_t i = 0; i < offset_.size(); ++i)
      for (int k = 0; k < width_; ++k) d[i] += weights_[i * width_ + k] * y[offset_[i] + k];
    return d;
  }
  std::size_t size() const { return offset_.size(); }

 private:
  int width_;
  std::vector<int> offset_;
  std::vector<double> weights_;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least-squares line through (x, y); requires at least two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Weighted L2 norm sqrt(sum w_i v_i^2).
double weighted_l2(std::span<const double> v, std::span<const double> w);

}  // namespace hitchin
