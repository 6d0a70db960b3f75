#pragma once

#include <vector>

namespace essc {

/// Fraction of disagreements minimized over the global label swap; in [0, 0.5].
double misclustering_rate(const std::vector<int>& pred, const std::vector<int>& truth);

struct ReplicateSummary {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample SD / sqrt(count)
  int count = 0;
  std::vector<double> raw;
};

/// Mean and standard error of replicate rates; requires at least 2 values.
ReplicateSummary summarize(const std::vector<double>& rates);

}  // namespace essc
