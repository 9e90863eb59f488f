#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <Eigen/Core>

#include "tracerl/nn/rng.hpp"

namespace tracerl {

// |A| x d matrix whose row i is the embedding e(a_i).
class ActionEmbeddingTable {
 public:
  ActionEmbeddingTable() = default;
  explicit ActionEmbeddingTable(Eigen::MatrixXd rows);

  // Rows uniform in +-scale.
  static ActionEmbeddingTable random(int action_count, int dim, Rng& rng, double scale = 0.1);

  int action_count() const { return static_cast<int>(rows_.rows()); }
  int dim() const { return static_cast<int>(rows_.cols()); }

  Eigen::VectorXd lookup(int action_index) const;
  // d x B matrix of the embeddings of the given actions.
  Eigen::MatrixXd gather(std::span<const int> action_indices) const;

  Eigen::MatrixXd& rows() { return rows_; }
  const Eigen::MatrixXd& rows() const { return rows_; }

  bool frozen = false;

 private:
  Eigen::MatrixXd rows_;
};

// CSV with header action_index,e_0,...,e_{d-1}; round-trip exact (17 digits).
void write_embedding_csv(std::ostream& out, const ActionEmbeddingTable& table);
ActionEmbeddingTable read_embedding_csv(std::istream& in);
void save_embedding_csv(const std::string& path, const ActionEmbeddingTable& table);
ActionEmbeddingTable load_embedding_csv(const std::string& path);

}  // namespace tracerl
