#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace tracerl {

// Seeded engine threaded explicitly through every stochastic operation.
// Distributions are constructed per call so the full generator state is the
// engine state alone, which keeps checkpoints exact.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::string state() const;
  void set_state(const std::string& state);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer over (seed, stream tag); gives independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

}  // namespace tracerl
