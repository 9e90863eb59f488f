#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Core>

namespace tracerl {

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_block = 0;
  Eigen::Index worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares analytic gradients against central differences for every entry of
// every block. loss must be deterministic (fixed noise) and read the current
// values of params. Relative error is |a - n| / max(|a|, |n|, floor); the floor
// keeps entries whose true gradient is ~0 from dominating.
GradientCheckResult gradient_check(const std::function<double()>& loss, std::span<Eigen::MatrixXd> params,
                                   std::span<const Eigen::MatrixXd> analytic, double h = 1e-5,
                                   double floor = 1e-6);

}  // namespace tracerl
