#include "essc/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "essc/rng.hpp"

namespace essc {

namespace {

struct LloydOutcome {
  std::vector<int> assignment;
  double objective = std::numeric_limits<double>::infinity();
  bool collapsed = false;
  std::vector<double> trace;
};

Eigen::MatrixXd kmeanspp_centroids(const Eigen::MatrixXd& pts, int k, Rng& rng) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd centroids(k, pts.cols());
  centroids.row(0) = pts.row(static_cast<Eigen::Index>(rng.uniform_int(n)));
  Eigen::VectorXd dist2 =
      (pts.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_int(n));
    }
    centroids.row(c) = pts.row(pick);
    dist2 = dist2.cwiseMin(
        (pts.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

Eigen::MatrixXd centroids_from_assignment(const Eigen::MatrixXd& pts,
                                          const std::vector<int>& assign, int k) {
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, pts.cols());
  std::vector<int> counts(k, 0);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    centroids.row(assign[i]) += pts.row(i);
    ++counts[assign[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) centroids.row(c) /= counts[c];
  }
  return centroids;
}

LloydOutcome lloyd_once(const Eigen::MatrixXd& pts, const KMeansConfig& cfg, Rng& rng) {
  const Eigen::Index n = pts.rows();
  const int k = cfg.k;

  Eigen::MatrixXd centroids;
  if (cfg.init == KMeansConfig::Init::KMeansPP) {
    centroids = kmeanspp_centroids(pts, k, rng);
  } else {
    std::vector<int> assign(n);
    for (Eigen::Index i = 0; i < n; ++i) assign[i] = static_cast<int>(rng.uniform_int(k));
    centroids = centroids_from_assignment(pts, assign, k);
  }

  LloydOutcome out;
  out.assignment.assign(n, 0);
  Eigen::MatrixXd prev_centroids = centroids;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    bool changed = false;
    double wcss = 0.0;
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (pts.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      wcss += best_d;
      if (out.assignment[i] != best) changed = true;
      out.assignment[i] = best;
      ++counts[best];
    }
    if (cfg.record_trace) out.trace.push_back(wcss);

    // revive an empty cluster at the farthest point from its centroid
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d =
              (pts.row(i) - centroids.row(out.assignment[i])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        --counts[out.assignment[far]];
        out.assignment[far] = c;
        ++counts[c];
        changed = true;
      }
    }

    centroids = centroids_from_assignment(pts, out.assignment, k);
    const double shift = (centroids - prev_centroids).rowwise().norm().maxCoeff();
    prev_centroids = centroids;
    if (!changed || shift < cfg.tol) break;
  }

  double wcss = 0.0;
  std::vector<int> counts(k, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    wcss += (pts.row(i) - centroids.row(out.assignment[i])).squaredNorm();
    ++counts[out.assignment[i]];
  }
  if (cfg.record_trace) out.trace.push_back(wcss);
  out.objective = wcss;
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) out.collapsed = true;
    for (int c2 = c + 1; c2 < k; ++c2) {
      if ((centroids.row(c) - centroids.row(c2)).norm() == 0.0) out.collapsed = true;
    }
  }
  return out;
}

ClusterResult kmeans_rows(const Eigen::MatrixXd& rows, const KMeansConfig& cfg,
                          std::uint64_t seed) {
  return kmeans(rows, cfg, seed);
}

}  // namespace

ClusterResult kmeans(const Eigen::MatrixXd& points, const KMeansConfig& cfg,
                     std::uint64_t seed) {
  if (points.rows() < 2) throw std::invalid_argument("kmeans: need at least 2 points");
  if (cfg.k < 2) throw std::invalid_argument("kmeans: k >= 2");
  if (cfg.restarts < 1 || cfg.max_iters < 1 || cfg.tol <= 0.0) {
    throw std::invalid_argument("kmeans: invalid configuration");
  }

  LloydOutcome best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(child_seed(seed, 0x6b6d65616e73ULL, static_cast<std::uint64_t>(r)));
    LloydOutcome out = lloyd_once(points, cfg, rng);
    if (out.objective < best.objective) best = std::move(out);
  }

  ClusterResult res;
  res.assignment = std::move(best.assignment);
  res.objective = best.objective;
  res.restarts_used = cfg.restarts;
  res.collapsed = best.collapsed;
  res.objective_trace = std::move(best.trace);
  return res;
}

ClusterResult sc1(const DataMatrix& X, const KMeansConfig& cfg, std::uint64_t seed) {
  const SpectralSummary s = top2_singular(X);
  Eigen::MatrixXd rows(X.n(), 2);
  rows.col(0) = s.u1;
  rows.col(1) = s.u2;
  return kmeans_rows(rows, cfg, seed);
}

ClusterResult sc2(const DataMatrix& X, const KMeansConfig& cfg, std::uint64_t seed) {
  X.validate();
  const int n = X.n();
  const double p = static_cast<double>(X.p());

  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (X.values.col(i) - X.values.col(j)).squaredNorm();
      A(i, j) = A(j, i) = std::exp(-d2 / (2.0 * p));
    }
  }
  Eigen::VectorXd rowsum = A.rowwise().sum();
  if ((rowsum.array() <= 0.0).any()) {
    throw std::runtime_error("sc2: zero affinity row sum");
  }
  const Eigen::VectorXd dinv_sqrt = rowsum.array().rsqrt().matrix();
  const Eigen::MatrixXd L =
      dinv_sqrt.asDiagonal() * A * dinv_sqrt.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) throw std::runtime_error("sc2: eigensolver failed");
  Eigen::MatrixXd rows(n, 2);
  rows.col(0) = es.eigenvectors().col(n - 1);
  rows.col(1) = es.eigenvectors().col(n - 2);
  for (int i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  return kmeans_rows(rows, cfg, seed);
}

ClusterResult demeaned_spectral(const DataMatrix& X, const KMeansConfig& cfg,
                                std::uint64_t seed) {
  X.validate();
  DataMatrix centered{X.values.colwise() - X.values.rowwise().mean()};
  const SpectralSummary s = top2_singular(centered);
  Eigen::MatrixXd rows(X.n(), 1);
  rows.col(0) = s.u1;
  return kmeans_rows(rows, cfg, seed);
}

std::vector<int> sign_cluster(const Eigen::VectorXd& u1) {
  std::vector<int> out(u1.size());
  for (Eigen::Index i = 0; i < u1.size(); ++i) out[i] = u1(i) > 0.0 ? 1 : 0;
  return out;
}

std::vector<int> bayes_oracle(const DataMatrix& X, const Eigen::VectorXd& mu1,
                              const Eigen::VectorXd& mu2,
                              const Eigen::MatrixXd& Sigma, double pi) {
  X.validate();
  if (pi <= 0.0 || pi >= 1.0) throw std::invalid_argument("bayes_oracle: pi in (0,1)");
  if (mu1.size() != X.p() || mu2.size() != X.p()) {
    throw std::invalid_argument("bayes_oracle: mean dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Sigma);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("bayes_oracle: covariance not positive definite");
  }
  const Eigen::VectorXd w = llt.solve(mu1 - mu2);
  const Eigen::VectorXd mid = 0.5 * (mu1 + mu2);
  const double threshold = std::log(pi / (1.0 - pi));

  std::vector<int> out(X.n());
  for (int i = 0; i < X.n(); ++i) {
    const double stat = (X.values.col(i) - mid).dot(w);
    out[i] = stat >= threshold ? 1 : 0;
  }
  return out;
}

}  // namespace essc
