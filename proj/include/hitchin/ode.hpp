#pragma once

#include <functional>

#include <Eigen/Core>

namespace hitchin {

using State2 = Eigen::Vector2d;
using Rhs2 = std::function<State2(double, const State2&)>;

struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  long max_steps = 1'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) from x0 to x1 (either direction); lands exactly on x1.
/// Throws hitchin::NumericalFailure if the step budget is exhausted or the step underflows.
State2 integrate_dopri(const Rhs2& f, double x0, const State2& y0, double x1,
                       const OdeOptions& opt = {}, OdeStats* stats = nullptr);

}  // namespace hitchin
