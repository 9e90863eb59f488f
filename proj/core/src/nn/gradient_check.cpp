#include "tracerl/nn/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracerl {

GradientCheckResult gradient_check(const std::function<double()>& loss, std::span<Eigen::MatrixXd> params,
                                   std::span<const Eigen::MatrixXd> analytic, double h, double floor) {
  if (params.size() != analytic.size()) throw std::invalid_argument("gradient_check: block count mismatch");
  GradientCheckResult result;
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& p = params[b];
    if (p.rows() != analytic[b].rows() || p.cols() != analytic[b].cols()) {
      throw std::invalid_argument("gradient_check: shape mismatch");
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double saved = p(i);
      p(i) = saved + h;
      const double up = loss();
      p(i) = saved - h;
      const double down = loss();
      p(i) = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[b](i);
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double rel = std::abs(a - numeric) / denom;
      if (rel > result.max_relative_error) {
        result = {rel, b, i, a, numeric};
      }
    }
  }
  return result;
}

}  // namespace tracerl
