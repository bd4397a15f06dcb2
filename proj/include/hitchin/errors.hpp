#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hitchin {

/// A numerical procedure failed to meet its contract (non-convergence, divergence).
/// `history` carries the last residuals or mismatches for diagnostics.
struct NumericalFailure : std::runtime_error {
  std::vector<double> history;
  NumericalFailure(const std::string& what, std::vector<double> h = {})
      : std::runtime_error(what), history(std::move(h)) {}
};

}  // namespace hitchin
