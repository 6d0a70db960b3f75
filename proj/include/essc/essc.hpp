#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "essc/baselines.hpp"
#include "essc/core_linalg.hpp"

namespace essc {

struct ThresholdSchedule {
  double tau = 0.0;    // ratio buffer
  double delta = 0.0;  // flatness threshold
};

/// tau = 1/ln(n+p), delta = 1/ln^2(n+p).
ThresholdSchedule default_thresholds(int n, int p);

struct EigenSelection {
  Branch branch = Branch::First;
  double ratio = 0.0;      // t1/t2, +inf encoded as infinity()
  double fstat_abs = 0.0;
  std::vector<Eigen::VectorXd> selected;  // length 1 or 2
};

/// Eigenvector selection: both when t1/t2 < 1 + tau; otherwise the first when
/// |fstat| >= delta (boundary included), else the second. A numerically zero
/// t2 (< 1e-12 * t1) is treated as an infinite ratio.
EigenSelection essc_select(const SpectralSummary& spec, const ThresholdSchedule& th);

/// Full pipeline: top-two singular structure, eigenvector selection, then
/// 2-means on the selected coordinate(s). Deterministic given the seed.
ClusterResult essc_cluster(const DataMatrix& X,
                           std::optional<ThresholdSchedule> th,
                           const KMeansConfig& kmeans_cfg, std::uint64_t seed);

}  // namespace essc
