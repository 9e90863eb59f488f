#include "tracerl/nn/gaussian.hpp"

#include <stdexcept>

namespace tracerl {

GaussianSample gaussian_reparameterize(const Eigen::VectorXd& mu, const Eigen::VectorXd& log_sigma,
                                       const Eigen::VectorXd& noise) {
  if (mu.size() != log_sigma.size() || mu.size() != noise.size()) {
    throw std::invalid_argument("gaussian_reparameterize: length mismatch");
  }
  const Eigen::ArrayXd ls = log_sigma.array().max(kLogSigmaMin).min(kLogSigmaMax);
  GaussianSample out;
  out.sample = mu.array() + ls.exp() * noise.array();
  // (sample - mu) / sigma == noise exactly up to rounding; use noise directly.
  out.log_prob = (-0.5 * noise.array().square() - ls - 0.5 * kLogTwoPi).sum();
  return out;
}

Eigen::MatrixXd clamp_log_sigma(const Eigen::MatrixXd& raw) {
  return raw.array().max(kLogSigmaMin).min(kLogSigmaMax).matrix();
}

Eigen::MatrixXd clamp_log_sigma_mask(const Eigen::MatrixXd& raw) {
  return ((raw.array() >= kLogSigmaMin) && (raw.array() <= kLogSigmaMax)).cast<double>().matrix();
}

Eigen::RowVectorXd kl_to_standard_normal(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& log_sigma) {
  return 0.5 * (mu.array().square() + (2.0 * log_sigma.array()).exp() - 1.0 - 2.0 * log_sigma.array())
                   .matrix()
                   .colwise()
                   .sum();
}

}  // namespace tracerl
