#pragma once

#include <cstddef>
#include <vector>

#include "tracerl/env/transition.hpp"
#include "tracerl/nn/rng.hpp"

namespace tracerl {

// Fixed-capacity ring of transitions; sampling is uniform with replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return data_.empty(); }

  // i = 0 is the oldest record still held.
  const Transition& at(std::size_t i) const;

  std::vector<int> sample_indices(int count, Rng& rng) const;
  // Raw storage slot, as returned by sample_indices.
  const Transition& slot(int index) const { return data_[static_cast<std::size_t>(index)]; }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> data_;
};

}  // namespace tracerl
