#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "tracerl/env/gridworld.hpp"

namespace tracerl {

// Integer label per action; actions with equal labels share an effect.
using GroupFn = std::function<int(int action_index)>;

// Gridworld actions grouped by free-space net displacement. Labels are dense,
// numbered in order of first appearance over action indices.
struct DisplacementGroups {
  std::vector<int> labels;                     // per action
  std::vector<Eigen::Vector2i> displacements;  // per label
  int group_count() const { return static_cast<int>(displacements.size()); }
  GroupFn fn() const;
  // Label of a displacement, or -1 when no action produces it.
  int label_of(const Eigen::Vector2i& displacement) const;
};
DisplacementGroups displacement_groups(const GridworldConfig& config);

struct ClusterQuality {
  double intra_mean = 0.0;  // mean pairwise distance within groups
  double inter_mean = 0.0;  // mean pairwise distance across groups
  double ratio = 0.0;       // intra / inter
};

// Rows of `embeddings` labelled by `labels`. Throws when fewer than two
// groups exist or every cross-group distance is zero.
ClusterQuality cluster_quality(const Eigen::MatrixXd& embeddings, const std::vector<int>& labels);

// v = sum of plus rows - sum of minus rows; true when the group of
// nearest_action(v) is expected_group.
bool analogy_check(const Eigen::MatrixXd& table, const std::vector<int>& plus, const std::vector<int>& minus,
                   int expected_group, const GroupFn& group_fn);

// e(UUL) + e(ULR) - e(LRL) should land in the net-(0,+3) group of the
// three-move gridworld.
struct GridAnalogy {
  std::vector<int> plus;
  std::vector<int> minus;
  Eigen::Vector2i expected_displacement;
};
GridAnalogy three_step_up_analogy();

// Spearman rank correlation between action index and the first principal
// component of the table rows (signed; ties get average ranks).
double monotonicity_check(const Eigen::MatrixXd& table);

// Spearman rank correlation of two equally long samples.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Source/target action alignment under a shared frozen transition model.
// Target action a is aligned when the source group whose centroid lies
// nearest to e_T(a) has displacement scale * displacement(a).
struct AlignmentReport {
  std::vector<bool> aligned;     // per target action
  std::vector<int> nearest_group;  // source label per target action
  int aligned_count() const;
};
AlignmentReport alignment_check(const Eigen::MatrixXd& source_table, const DisplacementGroups& source_groups,
                                const Eigen::MatrixXd& target_table, const DisplacementGroups& target_groups,
                                int scale);

}  // namespace tracerl
