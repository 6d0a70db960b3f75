#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace essc {

/// p x n data matrix; columns are samples.
struct DataMatrix {
  Eigen::MatrixXd values;

  int p() const { return static_cast<int>(values.rows()); }
  int n() const { return static_cast<int>(values.cols()); }

  /// Throws std::invalid_argument on non-finite entries or degenerate shape.
  void validate() const;
};

/// Top-two singular structure of a data matrix plus the flatness statistic
/// computed from the leading right singular vector.
struct SpectralSummary {
  double t1 = 0.0;
  double t2 = 0.0;
  Eigen::VectorXd u1;  // unit n-vector, entry-sum >= 0
  Eigen::VectorXd u2;
  double fstat = 0.0;  // |sum(u1)| / sqrt(2n) - 1/sqrt(2)
};

/// Flatness statistic of a unit n-vector: zero when all entries equal 1/sqrt(n).
double flatness_stat(const Eigen::VectorXd& u);

/// Sign normalization: flip so the entry-sum is nonnegative; on an exact zero
/// sum, flip so the first nonzero entry is positive.
void canonicalize_sign(Eigen::VectorXd& u);

/// Top-two singular values and right singular vectors via a dense symmetric
/// eigendecomposition of the smaller Gram matrix.
SpectralSummary top2_singular(const DataMatrix& X);

/// Same contract as top2_singular, computed through the symmetric
/// eigendecomposition of the (n+p)x(n+p) block matrix [[0, X^T], [X, 0]].
/// Cross-validates the Gram-matrix path.
SpectralSummary linearization_eigs(const DataMatrix& X);

/// Operator norm (largest singular value) of an arbitrary real matrix.
double operator_norm(const Eigen::MatrixXd& A);

}  // namespace essc
