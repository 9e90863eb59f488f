#include "tracerl/agent/replay_buffer.hpp"

#include <stdexcept>

namespace tracerl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  data_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
  if (data_.size() < capacity_) return data_[i];
  return data_[(cursor_ + i) % capacity_];
}

std::vector<int> ReplayBuffer::sample_indices(int count, Rng& rng) const {
  if (data_.empty()) throw std::logic_error("ReplayBuffer::sample_indices: buffer is empty");
  std::vector<int> idx(static_cast<std::size_t>(count));
  for (auto& i : idx) i = rng.uniform_int(static_cast<int>(data_.size()));
  return idx;
}

}  // namespace tracerl
