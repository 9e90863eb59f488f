#include "tracerl/embedding/action_embedding_table.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracerl {

ActionEmbeddingTable::ActionEmbeddingTable(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.cols() < 1) throw std::invalid_argument("ActionEmbeddingTable: embedding dimension must be >= 1");
  if (!rows_.allFinite()) throw std::invalid_argument("ActionEmbeddingTable: non-finite entry");
}

ActionEmbeddingTable ActionEmbeddingTable::random(int action_count, int dim, Rng& rng, double scale) {
  if (action_count < 1 || dim < 1) throw std::invalid_argument("ActionEmbeddingTable::random: empty shape");
  Eigen::MatrixXd rows(action_count, dim);
  for (int r = 0; r < action_count; ++r) {
    for (int c = 0; c < dim; ++c) rows(r, c) = rng.uniform(-scale, scale);
  }
  return ActionEmbeddingTable(std::move(rows));
}

Eigen::VectorXd ActionEmbeddingTable::lookup(int action_index) const {
  if (action_index < 0 || action_index >= action_count()) {
    throw std::out_of_range("ActionEmbeddingTable::lookup: index " + std::to_string(action_index) +
                            " outside [0, " + std::to_string(action_count()) + ")");
  }
  return rows_.row(action_index).transpose();
}

Eigen::MatrixXd ActionEmbeddingTable::gather(std::span<const int> action_indices) const {
  Eigen::MatrixXd out(dim(), static_cast<Eigen::Index>(action_indices.size()));
  for (std::size_t i = 0; i < action_indices.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = lookup(action_indices[i]);
  }
  return out;
}

void write_embedding_csv(std::ostream& out, const ActionEmbeddingTable& table) {
  out << "action_index";
  for (int c = 0; c < table.dim(); ++c) out << ",e_" << c;
  out << '\n' << std::setprecision(17);
  for (int r = 0; r < table.action_count(); ++r) {
    out << r;
    for (int c = 0; c < table.dim(); ++c) out << ',' << table.rows()(r, c);
    out << '\n';
  }
}

ActionEmbeddingTable read_embedding_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("action_index", 0) != 0) {
    throw std::runtime_error("embedding csv: missing action_index header");
  }
  const auto width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (width < 1) throw std::runtime_error("embedding csv: header has no embedding columns");
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "embedding csv line " + std::to_string(line_no);
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    try {
      std::getline(ss, cell, ',');
      if (std::stoi(cell) != static_cast<int>(rows.size())) {
        throw std::runtime_error(where + ": rows must be in action order");
      }
      while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw std::runtime_error(where + ": not a number");
    }
    if (values.size() != width) throw std::runtime_error(where + ": ragged row");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error("embedding csv: no rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return ActionEmbeddingTable(std::move(m));
}

void save_embedding_csv(const std::string& path, const ActionEmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_embedding_csv(out, table);
}

ActionEmbeddingTable load_embedding_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_embedding_csv(in);
}

}  // namespace tracerl
