#include "essc/essc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace essc {

ThresholdSchedule default_thresholds(int n, int p) {
  if (n + p < 3) throw std::invalid_argument("default_thresholds: need n + p >= 3");
  const double lg = std::log(static_cast<double>(n + p));
  if (lg <= 1.0) throw std::invalid_argument("default_thresholds: n + p too small (tau >= 1)");
  return {1.0 / lg, 1.0 / (lg * lg)};
}

EigenSelection essc_select(const SpectralSummary& spec, const ThresholdSchedule& th) {
  if (spec.t1 <= 0.0) throw std::invalid_argument("essc_select: all-zero data (t1 = 0)");

  EigenSelection sel;
  sel.fstat_abs = std::abs(spec.fstat);
  sel.ratio = (spec.t2 < 1e-12 * spec.t1)
                  ? std::numeric_limits<double>::infinity()
                  : spec.t1 / spec.t2;

  if (sel.ratio < 1.0 + th.tau) {
    sel.branch = Branch::Both;
    sel.selected = {spec.u1, spec.u2};
  } else if (sel.fstat_abs >= th.delta) {
    sel.branch = Branch::First;
    sel.selected = {spec.u1};
  } else {
    sel.branch = Branch::Second;
    sel.selected = {spec.u2};
  }
  return sel;
}

ClusterResult essc_cluster(const DataMatrix& X,
                           std::optional<ThresholdSchedule> th,
                           const KMeansConfig& kmeans_cfg, std::uint64_t seed) {
  const SpectralSummary spec = top2_singular(X);
  const ThresholdSchedule sched = th.value_or(default_thresholds(X.n(), X.p()));
  const EigenSelection sel = essc_select(spec, sched);

  Eigen::MatrixXd points(X.n(), static_cast<Eigen::Index>(sel.selected.size()));
  for (std::size_t c = 0; c < sel.selected.size(); ++c) {
    points.col(static_cast<Eigen::Index>(c)) = sel.selected[c];
  }
  ClusterResult res = kmeans(points, kmeans_cfg, seed);
  res.branch = sel.branch;
  return res;
}

}  // namespace essc
