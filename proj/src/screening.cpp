#include "essc/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace essc {

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// One-sample KS distance of a sorted sample to N(0,1).
double ks_distance(std::vector<double>& sorted) {
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double F = std_normal_cdf(sorted[i]);
    d = std::max(d, std::max(F - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - F));
  }
  return d;
}

}  // namespace

Eigen::VectorXd ks_scores(const DataMatrix& X, bool normalize) {
  X.validate();
  const int p = X.p();
  const int n = X.n();
  if (n < 3) throw std::invalid_argument("ks_scores: need n >= 3");

  Eigen::VectorXd scores(p);
  std::vector<int> finite;
  finite.reserve(p);
  std::vector<double> row(n);
  for (int j = 0; j < p; ++j) {
    const double mean = X.values.row(j).mean();
    const double var =
        (X.values.row(j).array() - mean).square().sum() / (n - 1);
    if (var <= 0.0) {
      scores(j) = -std::numeric_limits<double>::infinity();
      continue;
    }
    const double sd = std::sqrt(var);
    for (int i = 0; i < n; ++i) row[i] = (X.values(j, i) - mean) / sd;
    scores(j) = std::sqrt(static_cast<double>(n)) * ks_distance(row);
    finite.push_back(j);
  }

  if (normalize && !finite.empty()) {
    double sum = 0.0;
    for (int j : finite) sum += scores(j);
    const double m = sum / finite.size();
    double ss = 0.0;
    for (int j : finite) ss += (scores(j) - m) * (scores(j) - m);
    const double sd = finite.size() > 1 ? std::sqrt(ss / (finite.size() - 1)) : 0.0;
    for (int j : finite) scores(j) = sd > 0.0 ? (scores(j) - m) / sd : 0.0;
  }
  return scores;
}

ScreeningResult select_top(const DataMatrix& X, int keep) {
  const Eigen::VectorXd scores = ks_scores(X);
  const int p = X.p();
  if (keep < 1 || keep > p) throw std::invalid_argument("select_top: keep must be in [1, p]");

  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores(a) != scores(b)) return scores(a) > scores(b);
    return a < b;
  });
  order.resize(keep);

  Eigen::MatrixXd reduced(keep, X.n());
  for (int r = 0; r < keep; ++r) reduced.row(r) = X.values.row(order[r]);
  return {scores, std::move(order), DataMatrix{std::move(reduced)}};
}

}  // namespace essc
