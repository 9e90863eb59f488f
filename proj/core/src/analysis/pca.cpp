#include "tracerl/analysis/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tracerl {

namespace {

constexpr double kTolerance = 1e-10;
constexpr int kMaxIterations = 10000;

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

// Deterministic start that is not orthogonal to any axis-aligned eigenvector.
Eigen::VectorXd start_vector(Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i);
  return v.normalized();
}

}  // namespace

ProjectionResult pca_project(const Eigen::MatrixXd& points, int k) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (k < 1 || k > d || d > n) throw std::invalid_argument("pca_project: requires 1 <= k <= d <= N");

  const Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  const double total = cov.trace();

  ProjectionResult out;
  out.components.resize(d, k);
  out.explained_variance_ratio.resize(k);
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd v = start_vector(d);
    // Keep the iterate orthogonal to earlier components so a deflated (zero)
    // spectrum still yields an orthonormal basis.
    const auto orthogonalize = [&](Eigen::VectorXd& x) {
      for (int p = 0; p < c; ++p) x -= out.components.col(p).dot(x) * out.components.col(p);
    };
    orthogonalize(v);
    if (v.norm() < kTolerance) {
      for (Eigen::Index i = 0; i < d; ++i) {
        v = Eigen::VectorXd::Unit(d, i);
        orthogonalize(v);
        if (v.norm() > kTolerance) break;
      }
    }
    v.normalize();
    for (int it = 0; it < kMaxIterations; ++it) {
      Eigen::VectorXd next = cov * v;
      orthogonalize(next);
      const double norm = next.norm();
      if (norm < kTolerance) break;  // remaining variance is zero; keep v
      next /= norm;
      if (next.dot(v) < 0.0) next = -next;
      const double change = (next - v).norm();
      v = next;
      if (change < kTolerance) break;
    }
    fix_sign(v);
    const double eigenvalue = v.dot(cov * v);
    out.components.col(c) = v;
    out.explained_variance_ratio(c) = total > 0.0 ? std::max(0.0, eigenvalue) / total : 0.0;
    cov -= eigenvalue * v * v.transpose();
  }
  out.projected = centered * out.components;
  return out;
}

}  // namespace tracerl
