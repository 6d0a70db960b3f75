#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "essc/core_linalg.hpp"

namespace essc {

enum class Branch { Both, First, Second };

struct KMeansConfig {
  enum class Init { KMeansPP, RandomPartition };
  int k = 2;
  int restarts = 30;
  int max_iters = 300;
  double tol = 1e-9;
  Init init = Init::KMeansPP;
  bool record_trace = false;  // keep the objective trace of the winning restart
};

struct ClusterResult {
  std::vector<int> assignment;  // values in {0, 1}
  double objective = 0.0;       // within-cluster sum of squares
  std::optional<Branch> branch; // selection tag when produced by essc_cluster
  int restarts_used = 0;
  bool collapsed = false;       // one label absent from the final assignment
  std::vector<double> objective_trace;  // per-iteration WCSS, if recorded
};

/// Lloyd's algorithm with k-means++ (or random-partition) seeding, best of
/// `restarts` runs by objective. `points` has one point per row. Deterministic
/// given the seed; restart r uses an independent stream derived from (seed, r).
ClusterResult kmeans(const Eigen::MatrixXd& points, const KMeansConfig& cfg,
                     std::uint64_t seed);

/// Plain spectral clustering: 2-means on the rows of the top-two right
/// singular vectors of X.
ClusterResult sc1(const DataMatrix& X, const KMeansConfig& cfg, std::uint64_t seed);

/// Kernel spectral clustering: Gaussian kernel exp(-||x-y||^2 / (2p)) with
/// zero diagonal, symmetric normalization D^{-1/2} A D^{-1/2}, top-two
/// eigenvectors row-normalized, then 2-means.
ClusterResult sc2(const DataMatrix& X, const KMeansConfig& cfg, std::uint64_t seed);

/// Subtract the column mean from every sample, then 2-means on the leading
/// right singular vector of the centered matrix.
ClusterResult demeaned_spectral(const DataMatrix& X, const KMeansConfig& cfg,
                                std::uint64_t seed);

/// Sign-based assignment from the leading right singular vector: label 1 where
/// the entry is positive, 0 otherwise (zeros included).
std::vector<int> sign_cluster(const Eigen::VectorXd& u1);

/// Likelihood-ratio classifier with known parameters: label 1 iff
/// (x - (mu1+mu2)/2)' Sigma^{-1} (mu1 - mu2) >= log(pi / (1 - pi)).
std::vector<int> bayes_oracle(const DataMatrix& X, const Eigen::VectorXd& mu1,
                              const Eigen::VectorXd& mu2,
                              const Eigen::MatrixXd& Sigma, double pi);

}  // namespace essc
