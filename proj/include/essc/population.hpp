#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <utility>

namespace essc {

/// Scalar summary (norms and inner product of the two class means) of the
/// noiseless model, together with the class sizes.
struct PopulationConfig {
  double c11 = 0.0;  // ||mu1||^2
  double c22 = 0.0;  // ||mu2||^2
  double c12 = 0.0;  // mu1' mu2
  int n1 = 1;
  int n2 = 1;

  void validate() const;
};

enum class CaseLabel { A, B, C, DSingle, DBoth };

/// Closed-form spiked eigen-structure of the noiseless affinity matrix.
struct PopulationEigen {
  double d1sq = 0.0;
  double d2sq = 0.0;
  CaseLabel case_label = CaseLabel::A;
  bool power1 = false;  // eigenvector 1 has clustering power
  bool power2 = false;
  // per-class entry values (value on class-1 coordinates, value on class-2)
  std::array<double, 2> values1{0.0, 0.0};
  std::optional<std::array<double, 2>> values2;
  // false in the multiplicity case, where the returned basis is arbitrary
  bool identifiable = true;
};

/// Top-two eigenvalues of the noiseless affinity matrix, closed form.
/// Their sum equals n1*c11 + n2*c22 (trace identity).
std::pair<double, double> population_eigenvalues(const PopulationConfig& cfg);

/// Case classification with clustering-power flags and per-class eigenvector
/// values. Equality tests use relative tolerance 1e-9; the classification is
/// discontinuous so exact-arithmetic intent is approximated tightly.
PopulationEigen classify_clustering_power(const PopulationConfig& cfg);

/// Assemble the n x n noiseless affinity matrix explicitly (test oracle and
/// diagnostics; class-1 coordinates come first).
Eigen::MatrixXd assemble_population_matrix(const PopulationConfig& cfg);

enum class OracleSelection { First, Second, Both, FirstAndSecond };
enum class OracleMode { RatioTest, SetBuilding };

/// RatioTest: take both eigenvectors when d1^2/d2^2 < 1 + c_n, otherwise the
/// first if it has two distinct values, else the second.
/// SetBuilding: start from the first eigenvector's distinctness, then add the
/// second when d2^2 > 0 and it is distinct as well.
OracleSelection oracle_select(const PopulationEigen& pe, double c_n,
                              OracleMode mode = OracleMode::RatioTest);

/// Default buffer for the ratio test: 1 / log(n1 + n2 + p).
double default_oracle_threshold(int n1, int n2, int p);

/// Leading eigenvalue after demeaning: n1*n2*||mu1 - mu2||^2 / (n1 + n2).
/// delta_sq must equal c11 + c22 - 2*c12 (consistency check); the second
/// demeaned eigenvalue is 0 by construction.
double centered_leading_eigenvalue(const PopulationConfig& cfg, double delta_sq);

/// Exact second-moment data of the noise block matrix needed by the
/// deterministic-equivalent solver. `wquad(k,l)` is the quadratic form of the
/// covariance in the unit left singular vectors of the mean matrix.
struct NoiseMoments {
  double trace = 0.0;        // tr(Sigma)
  Eigen::Matrix2d wquad = Eigen::Matrix2d::Zero();
  int n = 0;                 // number of samples
};

struct TSolverConfig {
  double sigma_n = 0.0;  // ||Sigma|| * sqrt(n + p)
  double a_n = 0.0;      // d2 - sigma_n
  double b_n = 0.0;      // d1 + sigma_n
  int truncation_L = 2;
  double root_tolerance = 0.0;  // 0 -> 1e-9 * b_n
};

/// 2x2 deterministic-equivalent matrix whose determinant vanishes at the
/// asymptotic means of the top two singular values. Resolvent series truncated
/// at order 2: odd noise moments vanish for centered Gaussian noise and the
/// second moment is available in closed form.
Eigen::Matrix2d f_matrix(double z, double d1, double d2, const NoiseMoments& nm);

/// Roots of det f(z) = 0 in [a_n, b_n], located by minimizing the strictly
/// convex determinant and bracketing on each side. Returns (t1, t2) with
/// t1 >= t2; a single tangent root is reported twice. Throws when no root
/// exists or when a root violates |t_k - d_k| <= 10 sigma_n^2 / d2.
std::pair<double, double> solve_t_values(double d1, double d2,
                                         const NoiseMoments& nm,
                                         const TSolverConfig& cfg);

/// Diagnostic matrix z^2 D^{-1} f(z) - V' W V used by the fluctuation checks;
/// `vwv` is the realized 2x2 matrix of noise quadratic forms.
Eigen::Matrix2d g_matrix_diagnostic(double z, const Eigen::Matrix2d& vwv,
                                    const Eigen::Matrix2d& f_at_z,
                                    double d1, double d2);

}  // namespace essc
