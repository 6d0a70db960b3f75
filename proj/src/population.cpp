#include "essc/population.hpp"

#include <cmath>
#include <stdexcept>

namespace essc {

namespace {

constexpr double kCaseTol = 1e-9;   // relative tolerance for case boundaries
constexpr double kValueTol = 1e-8;  // two entry values considered distinct

bool rel_eq(double a, double b, double tol = kCaseTol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool distinct_values(const std::array<double, 2>& v) {
  return std::abs(v[0] - v[1]) >
         kValueTol * std::max({std::abs(v[0]), std::abs(v[1]), 1e-300});
}

// Solve the per-class value equations
//   (n1 c11 - d^2) v1 + n2 c12 v2 = 0
//   n1 c12 v1 + (n2 c22 - d^2) v2 = 0
// for a unit eigenvector (n1 v1^2 + n2 v2^2 = 1), taking the better
// conditioned row. Sign convention: nonnegative entry sum.
std::array<double, 2> eigvec_values(const PopulationConfig& c, double dsq) {
  const double r1a = c.n1 * c.c11 - dsq, r1b = c.n2 * c.c12;
  const double r2a = c.n1 * c.c12, r2b = c.n2 * c.c22 - dsq;
  double v1, v2;
  if (std::hypot(r1a, r1b) >= std::hypot(r2a, r2b)) {
    v1 = -r1b;
    v2 = r1a;
  } else {
    v1 = -r2b;
    v2 = r2a;
  }
  if (v1 == 0.0 && v2 == 0.0) {
    // both rows vanished (multiplicity); any direction works
    v1 = 1.0;
    v2 = 0.0;
  }
  const double norm = std::sqrt(c.n1 * v1 * v1 + c.n2 * v2 * v2);
  v1 /= norm;
  v2 /= norm;
  if (c.n1 * v1 + c.n2 * v2 < 0.0) {
    v1 = -v1;
    v2 = -v2;
  }
  return {v1, v2};
}

}  // namespace

void PopulationConfig::validate() const {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("PopulationConfig: class sizes must be positive");
  if (c11 < 0.0 || c22 < 0.0) throw std::invalid_argument("PopulationConfig: mean norms must be nonnegative");
  if (c12 * c12 > c11 * c22 * (1.0 + 1e-12) + 1e-300) {
    throw std::invalid_argument("PopulationConfig: Cauchy-Schwarz violated (c12^2 > c11*c22)");
  }
  // c11 = c22 = c12 encodes mu1 = mu2, excluded by the model
  if (rel_eq(c11, c22, 1e-12) && rel_eq(c11, c12, 1e-12)) {
    throw std::invalid_argument("PopulationConfig: configuration encodes mu1 = mu2");
  }
}

std::pair<double, double> population_eigenvalues(const PopulationConfig& cfg) {
  cfg.validate();
  const double s1 = cfg.n1 * cfg.c11;
  const double s2 = cfg.n2 * cfg.c22;
  const double trace = s1 + s2;
  double disc = s1 * s1 + s2 * s2 + 4.0 * cfg.n1 * cfg.n2 * cfg.c12 * cfg.c12 -
                2.0 * cfg.n1 * cfg.n2 * cfg.c11 * cfg.c22;
  if (disc < -1e-12) throw std::runtime_error("population_eigenvalues: negative discriminant");
  if (disc < 0.0) disc = 0.0;
  const double root = std::sqrt(disc);
  const double d1sq = 0.5 * (trace + root);
  // product of the roots, numerically stabler than 0.5*(trace - root) when
  // the second eigenvalue is near zero
  const double prod = cfg.n1 * cfg.n2 * (cfg.c11 * cfg.c22 - cfg.c12 * cfg.c12);
  double d2sq = (d1sq > 0.0) ? prod / d1sq : 0.0;
  if (d2sq < -1e-12) throw std::runtime_error("population_eigenvalues: negative second eigenvalue");
  if (d2sq < 0.0) d2sq = 0.0;
  return {d1sq, d2sq};
}

Eigen::MatrixXd assemble_population_matrix(const PopulationConfig& cfg) {
  const int n = cfg.n1 + cfg.n2;
  Eigen::VectorXd a1 = Eigen::VectorXd::Zero(n), a2 = Eigen::VectorXd::Zero(n);
  a1.head(cfg.n1).setOnes();
  a2.tail(cfg.n2).setOnes();
  return cfg.c11 * a1 * a1.transpose() + cfg.c22 * a2 * a2.transpose() +
         cfg.c12 * (a1 * a2.transpose() + a2 * a1.transpose());
}

PopulationEigen classify_clustering_power(const PopulationConfig& cfg) {
  auto [d1sq, d2sq] = population_eigenvalues(cfg);
  const double s1 = cfg.n1 * cfg.c11;
  const double s2 = cfg.n2 * cfg.c22;

  PopulationEigen pe;
  pe.d1sq = d1sq;
  pe.d2sq = d2sq;

  const bool degenerate = rel_eq(cfg.c12 * cfg.c12, cfg.c11 * cfg.c22);
  const bool c12_zero =
      std::abs(cfg.c12) <= kCaseTol * std::max(std::sqrt(cfg.c11 * cfg.c22), 1e-300);

  const double inv_sqrt_n1 = 1.0 / std::sqrt(static_cast<double>(cfg.n1));
  const double inv_sqrt_n2 = 1.0 / std::sqrt(static_cast<double>(cfg.n2));

  if (degenerate) {
    pe.case_label = CaseLabel::A;
    pe.d2sq = 0.0;
    pe.values1 = eigvec_values(cfg, pe.d1sq);
    // in-span direction for the null eigenvalue, weighted-orthogonal to values1
    std::array<double, 2> v2{cfg.n2 * pe.values1[1], -cfg.n1 * pe.values1[0]};
    const double norm = std::sqrt(cfg.n1 * v2[0] * v2[0] + cfg.n2 * v2[1] * v2[1]);
    pe.values2 = std::array<double, 2>{v2[0] / norm, v2[1] / norm};
    pe.power1 = true;
    pe.power2 = false;
    return pe;
  }

  if (c12_zero && rel_eq(s1, s2)) {
    // multiplicity: the eigenspace is two dimensional and the basis below is
    // one arbitrary orthonormal choice
    pe.case_label = CaseLabel::B;
    pe.identifiable = false;
    pe.values1 = {inv_sqrt_n1, 0.0};
    pe.values2 = std::array<double, 2>{0.0, inv_sqrt_n2};
    pe.power1 = pe.power2 = true;
    return pe;
  }

  if (c12_zero) {
    pe.case_label = CaseLabel::C;
    if (s1 >= s2) {
      pe.values1 = {inv_sqrt_n1, 0.0};
      pe.values2 = std::array<double, 2>{0.0, inv_sqrt_n2};
    } else {
      pe.values1 = {0.0, inv_sqrt_n2};
      pe.values2 = std::array<double, 2>{inv_sqrt_n1, 0.0};
    }
    pe.power1 = pe.power2 = true;
    return pe;
  }

  const double balance1 = s1 + cfg.n2 * cfg.c12;
  const double balance2 = s2 + cfg.n1 * cfg.c12;
  pe.values1 = eigvec_values(cfg, pe.d1sq);
  pe.values2 = eigvec_values(cfg, pe.d2sq);

  if (rel_eq(balance1, balance2)) {
    pe.case_label = CaseLabel::DSingle;
    // the flat eigenvector is the one whose eigenvalue equals the common
    // balance value; force exact flatness there
    const double flat_dsq = 0.5 * (balance1 + balance2);
    const int n = cfg.n1 + cfg.n2;
    const std::array<double, 2> flat{1.0 / std::sqrt(static_cast<double>(n)),
                                     1.0 / std::sqrt(static_cast<double>(n))};
    if (std::abs(pe.d1sq - flat_dsq) <= std::abs(pe.d2sq - flat_dsq)) {
      pe.values1 = flat;
      pe.power1 = false;
      pe.power2 = pe.d2sq > 0.0 && distinct_values(*pe.values2);
    } else {
      pe.values2 = flat;
      pe.power2 = false;
      pe.power1 = pe.d1sq > 0.0 && distinct_values(pe.values1);
    }
    return pe;
  }

  pe.case_label = CaseLabel::DBoth;
  pe.power1 = pe.d1sq > 0.0 && distinct_values(pe.values1);
  pe.power2 = pe.d2sq > 0.0 && distinct_values(*pe.values2);
  return pe;
}

OracleSelection oracle_select(const PopulationEigen& pe, double c_n, OracleMode mode) {
  const bool first_distinct = distinct_values(pe.values1);
  const bool second_distinct = pe.values2.has_value() && distinct_values(*pe.values2);

  if (mode == OracleMode::RatioTest) {
    // d2^2 = 0 makes the ratio infinite; fall through to the distinctness check
    if (pe.d2sq > 0.0 && pe.d1sq / pe.d2sq < 1.0 + c_n) return OracleSelection::Both;
    return first_distinct ? OracleSelection::First : OracleSelection::Second;
  }
  if (!first_distinct) return OracleSelection::Second;
  if (pe.d2sq > 0.0 && second_distinct) return OracleSelection::FirstAndSecond;
  return OracleSelection::First;
}

double default_oracle_threshold(int n1, int n2, int p) {
  return 1.0 / std::log(static_cast<double>(n1 + n2 + p));
}

double centered_leading_eigenvalue(const PopulationConfig& cfg, double delta_sq) {
  cfg.validate();
  const double expected = cfg.c11 + cfg.c22 - 2.0 * cfg.c12;
  if (std::abs(delta_sq - expected) > 1e-10 * std::max(1.0, std::abs(expected))) {
    throw std::invalid_argument("centered_leading_eigenvalue: delta_sq inconsistent with config");
  }
  const double n = cfg.n1 + cfg.n2;
  return cfg.n1 * cfg.n2 * delta_sq / n;
}

Eigen::Matrix2d f_matrix(double z, double d1, double d2, const NoiseMoments& nm) {
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d D = Eigen::Vector2d(d1, d2).asDiagonal();
  // exact second moment of the noise block matrix in the spiked directions:
  //   v_k' E[W^2] v_l = (tr(Sigma) delta_kl + n w_k' Sigma w_l) / 2
  // and the mixed form flips the sign of the w-part.
  // Note: the source derivation places tr(Sigma) on the sample block and
  // n*Sigma on the feature block; the reversed ordering sometimes quoted is a
  // typographical swap.
  const Eigen::Matrix2d E2 = 0.5 * (nm.trace * I + nm.n * nm.wquad);
  const Eigen::Matrix2d E2m = 0.5 * (nm.trace * I - nm.n * nm.wquad);

  const double z3 = z * z * z;
  const Eigen::Matrix2d r_vv = -(I / z + E2 / z3);
  const Eigen::Matrix2d r_vvm = -E2m / z3;
  const Eigen::Matrix2d r_vmvm = r_vv;  // same second-moment structure
  const Eigen::Matrix2d r_vmv = -E2m.transpose() / z3;

  const Eigen::Matrix2d inner = (-D + r_vmvm).inverse();
  return I + D * (r_vv - r_vvm * inner * r_vmv);
}

std::pair<double, double> solve_t_values(double d1, double d2,
                                         const NoiseMoments& nm,
                                         const TSolverConfig& cfg) {
  if (!(d1 >= d2) || !(d2 > 0.0)) {
    throw std::invalid_argument("solve_t_values: need d1 >= d2 > 0");
  }
  if (cfg.truncation_L < 2) throw std::invalid_argument("solve_t_values: truncation_L >= 2");
  if (cfg.sigma_n == 0.0) return {d1, d2};  // noiseless: f(z) = I - D/z
  if (!(cfg.a_n < cfg.b_n)) throw std::invalid_argument("solve_t_values: empty interval");

  const double tol = cfg.root_tolerance > 0.0 ? cfg.root_tolerance : 1e-9 * cfg.b_n;
  auto detf = [&](double z) { return f_matrix(z, d1, d2, nm).determinant(); };

  // golden-section search for the interior minimum (det f is strictly convex
  // on the admissible interval)
  const double gr = 0.6180339887498949;
  double lo = cfg.a_n, hi = cfg.b_n;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = detf(x1), f2 = detf(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = detf(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = detf(x2);
    }
  }
  const double zmin = 0.5 * (lo + hi);
  const double fmin = detf(zmin);
  const double fa = detf(cfg.a_n);
  const double fb = detf(cfg.b_n);
  const double scale = std::max({std::abs(fa), std::abs(fb), 1.0});

  double t1, t2;
  if (fmin > 1e-12 * scale) {
    throw std::runtime_error(
        "solve_t_values: det f has no root in [a_n, b_n]; spike-gap assumptions violated");
  }
  if (fmin >= -1e-12 * scale) {
    t1 = t2 = zmin;  // tangent double root
  } else {
    if (fa <= 0.0 || fb <= 0.0) {
      throw std::runtime_error("solve_t_values: det f does not return positive at the interval ends");
    }
    auto bisect = [&](double neg, double pos) {
      // detf(neg) < 0 < detf(pos)
      for (int it = 0; it < 200 && std::abs(pos - neg) > tol; ++it) {
        const double mid = 0.5 * (neg + pos);
        (detf(mid) < 0.0 ? neg : pos) = mid;
      }
      return 0.5 * (neg + pos);
    };
    t2 = bisect(zmin, cfg.a_n);
    t1 = bisect(zmin, cfg.b_n);
  }

  const double rate_bound = 10.0 * cfg.sigma_n * cfg.sigma_n / d2;
  if (std::abs(t1 - d1) > rate_bound || std::abs(t2 - d2) > rate_bound) {
    throw std::runtime_error("solve_t_values: root drifted beyond the perturbation rate bound");
  }
  return {t1, t2};
}

Eigen::Matrix2d g_matrix_diagnostic(double z, const Eigen::Matrix2d& vwv,
                                    const Eigen::Matrix2d& f_at_z,
                                    double d1, double d2) {
  if (d1 == 0.0 || d2 == 0.0) {
    throw std::invalid_argument("g_matrix_diagnostic: eigenvalues must be nonzero");
  }
  const Eigen::Matrix2d Dinv = Eigen::Vector2d(1.0 / d1, 1.0 / d2).asDiagonal();
  return z * z * Dinv * f_at_z - vwv;
}

}  // namespace essc
