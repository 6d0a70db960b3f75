#pragma once

#include <Eigen/Dense>
#include <vector>

#include "essc/core_linalg.hpp"

namespace essc {

struct ScreeningResult {
  Eigen::VectorXd scores;        // normalized KS score per feature
  std::vector<int> kept_indices; // score descending, ties by index ascending
  DataMatrix reduced;            // kept rows, original column order
};

/// Per-feature normalized KS statistic: standardize the row, take the
/// one-sample KS distance to the standard normal CDF, scale by sqrt(n).
/// With normalize = true the p raw scores are then centered and scaled by
/// their own mean and SD. Constant rows score -infinity and are never kept.
Eigen::VectorXd ks_scores(const DataMatrix& X, bool normalize = true);

/// Keep the `keep` highest-scoring features (ties broken by lower index).
ScreeningResult select_top(const DataMatrix& X, int keep);

}  // namespace essc
