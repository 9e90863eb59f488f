#pragma once

#include <Eigen/Core>

namespace tracerl {

inline constexpr double kLogSigmaMin = -10.0;
inline constexpr double kLogSigmaMax = 2.0;
inline constexpr double kLogTwoPi = 1.8378770664093454836;

struct GaussianSample {
  Eigen::VectorXd sample;
  double log_prob = 0.0;
};

// sample = mu + exp(clamp(log_sigma)) .* noise, with the diagonal Gaussian
// log-density of the sample.
GaussianSample gaussian_reparameterize(const Eigen::VectorXd& mu, const Eigen::VectorXd& log_sigma,
                                       const Eigen::VectorXd& noise);

// Elementwise clamp of raw log-sigma outputs to [kLogSigmaMin, kLogSigmaMax].
Eigen::MatrixXd clamp_log_sigma(const Eigen::MatrixXd& raw);

// 1 where the raw value lies inside the clamp range (gradient passes), else 0.
Eigen::MatrixXd clamp_log_sigma_mask(const Eigen::MatrixXd& raw);

// Closed-form KL(N(mu, sigma) || N(0, I)) per column, log_sigma already clamped.
Eigen::RowVectorXd kl_to_standard_normal(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& log_sigma);

}  // namespace tracerl
