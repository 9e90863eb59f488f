#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tracerl/agent/discrete_sac.hpp"
#include "tracerl/agent/training.hpp"
#include "tracerl/io/config.hpp"

namespace tracerl {

enum class CheckpointKind { kTrace, kDiscrete };

struct NamedArray {
  std::string name;
  Eigen::MatrixXd value;
};

// File layout: 8-byte magic "TRACERL\0", u64 little-endian header length,
// compact JSON header, then every array as row-major little-endian float64
// in header order.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;
  int format_version = kFormatVersion;
  CheckpointKind kind = CheckpointKind::kTrace;
  std::string config_json;  // ExperimentConfig snapshot
  std::uint64_t seed = 0;
  int episode = 0;          // episodes trained
  long total_steps = 0;
  std::string rng_state;
  std::map<std::string, double> scalars;
  std::vector<NamedArray> arrays;

  const Eigen::MatrixXd& array(const std::string& name) const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(std::string_view bytes);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

Checkpoint make_checkpoint(const ExperimentConfig& config, std::uint64_t seed, const TraceArtifacts& artifacts,
                           const TrainingSummary& summary);
Checkpoint make_checkpoint(const ExperimentConfig& config, std::uint64_t seed, const DiscreteSacAgent& agent,
                           const TrainingSummary& summary);

// Rebuilds the trained objects; shapes come from the embedded config and
// every array must match them exactly.
ExperimentConfig checkpoint_config(const Checkpoint& checkpoint);
TraceArtifacts restore_trace_artifacts(const Checkpoint& checkpoint);
DiscreteSacAgent restore_discrete_agent(const Checkpoint& checkpoint);

}  // namespace tracerl
