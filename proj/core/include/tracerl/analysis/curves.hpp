#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tracerl {

// Per-seed episode returns.
using CurveEnsemble = std::vector<std::vector<double>>;

struct BootstrapBand {
  std::vector<double> mean;
  std::vector<double> low;
  std::vector<double> high;
};

// Percentile bootstrap over seeds. Curves are truncated to the shortest one;
// `mean` is the average of the resampled means.
BootstrapBand bootstrap_band(const CurveEnsemble& ensemble, double confidence = 0.95, int resamples = 1000,
                             std::uint64_t seed = 0);

// 1-based episode at which the trailing `window`-episode mean return first
// reaches `threshold`; nullopt when it never does.
std::optional<int> episodes_to_threshold(const std::vector<double>& returns, double threshold, int window = 100);

// Mean of the last `window` entries (all of them when shorter).
double tail_mean(const std::vector<double>& returns, int window = 100);

double median(std::vector<double> values);

}  // namespace tracerl
