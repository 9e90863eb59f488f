#include "tracerl/analysis/embedding_metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tracerl/agent/sac.hpp"
#include "tracerl/analysis/pca.hpp"

namespace tracerl {

GroupFn DisplacementGroups::fn() const {
  return [labels = labels](int action) { return labels.at(static_cast<std::size_t>(action)); };
}

int DisplacementGroups::label_of(const Eigen::Vector2i& displacement) const {
  for (std::size_t i = 0; i < displacements.size(); ++i) {
    if (displacements[i] == displacement) return static_cast<int>(i);
  }
  return -1;
}

DisplacementGroups displacement_groups(const GridworldConfig& config) {
  DisplacementGroups g;
  for (int a = 0; a < config.action_count(); ++a) {
    const Eigen::Vector2i disp = net_displacement(config, a);
    int label = g.label_of(disp);
    if (label < 0) {
      label = g.group_count();
      g.displacements.push_back(disp);
    }
    g.labels.push_back(label);
  }
  return g;
}

ClusterQuality cluster_quality(const Eigen::MatrixXd& embeddings, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != embeddings.rows()) {
    throw std::invalid_argument("cluster_quality: one label per embedding row required");
  }
  std::vector<int> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
    throw std::invalid_argument("cluster_quality: at least two groups required");
  }
  double intra = 0.0, inter = 0.0;
  long n_intra = 0, n_inter = 0;
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < embeddings.rows(); ++j) {
      const double dist = (embeddings.row(i) - embeddings.row(j)).norm();
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
        intra += dist;
        ++n_intra;
      } else {
        inter += dist;
        ++n_inter;
      }
    }
  }
  ClusterQuality q;
  q.intra_mean = n_intra > 0 ? intra / static_cast<double>(n_intra) : 0.0;
  q.inter_mean = inter / static_cast<double>(n_inter);
  if (!(q.inter_mean > 0.0)) throw std::domain_error("cluster_quality: ratio undefined, groups coincide");
  q.ratio = q.intra_mean / q.inter_mean;
  return q;
}

bool analogy_check(const Eigen::MatrixXd& table, const std::vector<int>& plus, const std::vector<int>& minus,
                   int expected_group, const GroupFn& group_fn) {
  const auto row = [&](int i) -> Eigen::VectorXd {
    if (i < 0 || i >= table.rows()) throw std::out_of_range("analogy_check: action index " + std::to_string(i));
    return table.row(i).transpose();
  };
  Eigen::VectorXd v = Eigen::VectorXd::Zero(table.cols());
  for (int i : plus) v += row(i);
  for (int i : minus) v -= row(i);
  return group_fn(nearest_action(ActionEmbeddingTable(table), v)) == expected_group;
}

GridAnalogy three_step_up_analogy() {
  GridworldConfig g;
  g.n_steps = 3;
  using M = Move;
  return {{encode_action(g, {M::kUp, M::kUp, M::kLeft}), encode_action(g, {M::kUp, M::kLeft, M::kRight})},
          {encode_action(g, {M::kLeft, M::kRight, M::kLeft})},
          Eigen::Vector2i(0, 3)};
}

namespace {

Eigen::VectorXd average_ranks(const Eigen::VectorXd& x) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
  Eigen::VectorXd ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x(order[j + 1]) == x(order[i])) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks(order[t]) = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("spearman: need two samples of equal length >= 2");
  const Eigen::VectorXd ra = average_ranks(a).array() - average_ranks(a).mean();
  const Eigen::VectorXd rb = average_ranks(b).array() - average_ranks(b).mean();
  const double denom = ra.norm() * rb.norm();
  return denom > 0.0 ? ra.dot(rb) / denom : 0.0;
}

double monotonicity_check(const Eigen::MatrixXd& table) {
  if (table.rows() < 2) throw std::invalid_argument("monotonicity_check: need at least two actions");
  const ProjectionResult p = pca_project(table, 1);
  return spearman(Eigen::VectorXd::LinSpaced(table.rows(), 0.0, static_cast<double>(table.rows() - 1)),
                  p.projected.col(0));
}

int AlignmentReport::aligned_count() const {
  return static_cast<int>(std::count(aligned.begin(), aligned.end(), true));
}

AlignmentReport alignment_check(const Eigen::MatrixXd& source_table, const DisplacementGroups& source_groups,
                                const Eigen::MatrixXd& target_table, const DisplacementGroups& target_groups,
                                int scale) {
  if (source_table.cols() != target_table.cols()) throw std::invalid_argument("alignment_check: widths differ");
  if (static_cast<Eigen::Index>(source_groups.labels.size()) != source_table.rows() ||
      static_cast<Eigen::Index>(target_groups.labels.size()) != target_table.rows()) {
    throw std::invalid_argument("alignment_check: group labels do not match table rows");
  }
  const int groups = source_groups.group_count();
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(groups, source_table.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(groups);
  for (Eigen::Index i = 0; i < source_table.rows(); ++i) {
    const int g = source_groups.labels[static_cast<std::size_t>(i)];
    centroids.row(g) += source_table.row(i);
    counts(g) += 1.0;
  }
  for (int g = 0; g < groups; ++g) centroids.row(g) /= counts(g);

  AlignmentReport report;
  for (Eigen::Index a = 0; a < target_table.rows(); ++a) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int g = 0; g < groups; ++g) {
      const double dist = (centroids.row(g) - target_table.row(a)).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = g;
      }
    }
    const Eigen::Vector2i want =
        scale * target_groups.displacements[static_cast<std::size_t>(target_groups.labels[static_cast<std::size_t>(a)])];
    report.nearest_group.push_back(best);
    report.aligned.push_back(source_groups.displacements[static_cast<std::size_t>(best)] == want);
  }
  return report;
}

}  // namespace tracerl
