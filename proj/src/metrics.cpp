#include "essc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace essc {

double misclustering_rate(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("misclustering_rate: length mismatch");
  }
  std::size_t diff = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) diff += (pred[i] != truth[i]);
  const std::size_t n = pred.size();
  return static_cast<double>(std::min(diff, n - diff)) / static_cast<double>(n);
}

ReplicateSummary summarize(const std::vector<double>& rates) {
  if (rates.size() < 2) throw std::invalid_argument("summarize: need at least 2 values");
  ReplicateSummary s;
  s.count = static_cast<int>(rates.size());
  s.raw = rates;
  double sum = 0.0;
  for (double r : rates) sum += r;
  s.mean = sum / s.count;
  double ss = 0.0;
  for (double r : rates) ss += (r - s.mean) * (r - s.mean);
  s.stderr_ = std::sqrt(ss / (s.count - 1)) / std::sqrt(static_cast<double>(s.count));
  return s;
}

}  // namespace essc
