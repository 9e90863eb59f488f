#include "tracerl/analysis/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tracerl/log.hpp"
#include "tracerl/nn/rng.hpp"

namespace tracerl {

namespace {

// Linear-interpolation quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

BootstrapBand bootstrap_band(const CurveEnsemble& ensemble, double confidence, int resamples, std::uint64_t seed) {
  if (ensemble.empty()) throw std::invalid_argument("bootstrap_band: empty ensemble");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("bootstrap_band: confidence in (0, 1)");
  if (resamples < 1) throw std::invalid_argument("bootstrap_band: resamples must be positive");
  std::size_t length = ensemble.front().size();
  for (const auto& c : ensemble) {
    length = std::min(length, c.size());
    for (double v : c) {
      if (!std::isfinite(v)) throw std::invalid_argument("bootstrap_band: non-finite return");
    }
  }
  if (ensemble.size() == 1) log_warning("bootstrap_band: single seed, band collapses to the curve");

  const int seeds = static_cast<int>(ensemble.size());
  Rng rng(seed);
  std::vector<std::vector<int>> draws(static_cast<std::size_t>(resamples), std::vector<int>(ensemble.size()));
  for (auto& draw : draws) {
    for (int& s : draw) s = rng.uniform_int(seeds);
  }

  BootstrapBand band;
  band.mean.resize(length);
  band.low.resize(length);
  band.high.resize(length);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (std::size_t e = 0; e < length; ++e) {
    for (std::size_t r = 0; r < draws.size(); ++r) {
      double sum = 0.0;
      for (int s : draws[r]) sum += ensemble[static_cast<std::size_t>(s)][e];
      means[r] = sum / seeds;
    }
    double total = 0.0;
    for (double m : means) total += m;
    band.mean[e] = total / resamples;
    std::sort(means.begin(), means.end());
    band.low[e] = quantile(means, 0.5 * (1.0 - confidence));
    band.high[e] = quantile(means, 0.5 * (1.0 + confidence));
  }
  return band;
}

std::optional<int> episodes_to_threshold(const std::vector<double>& returns, double threshold, int window) {
  if (window < 1) throw std::invalid_argument("episodes_to_threshold: window must be >= 1");
  if (static_cast<std::size_t>(window) > returns.size()) {
    log_warning("episodes_to_threshold: window " + std::to_string(window) + " exceeds curve length " +
                std::to_string(returns.size()));
    return std::nullopt;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    sum += returns[i];
    if (i >= static_cast<std::size_t>(window)) sum -= returns[i - static_cast<std::size_t>(window)];
    if (i + 1 >= static_cast<std::size_t>(window) && sum / window >= threshold) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

double tail_mean(const std::vector<double>& returns, int window) {
  if (returns.empty()) throw std::invalid_argument("tail_mean: empty curve");
  const std::size_t n = std::min(returns.size(), static_cast<std::size_t>(std::max(window, 1)));
  double sum = 0.0;
  for (std::size_t i = returns.size() - n; i < returns.size(); ++i) sum += returns[i];
  return sum / static_cast<double>(n);
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace tracerl
