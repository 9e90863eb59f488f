#pragma once

#include <Eigen/Core>

namespace tracerl {

struct ProjectionResult {
  Eigen::MatrixXd components;  // d x k, orthonormal columns
  Eigen::MatrixXd projected;   // N x k, centered points in component coordinates
  Eigen::VectorXd explained_variance_ratio;
};

// Top-k principal directions of the rows of `points` by power iteration with
// deflation. Each component's largest-magnitude entry is made positive.
// Requires 1 <= k <= d <= N.
ProjectionResult pca_project(const Eigen::MatrixXd& points, int k);

}  // namespace tracerl
