#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "essc/core_linalg.hpp"

namespace essc {

struct CovarianceSpec {
  enum class Kind { IdentityScaled, Ar1, Dense };
  Kind kind = Kind::IdentityScaled;
  int p = 1;
  double scale = 1.0;           // IdentityScaled: Sigma = scale * I
  double rho = 0.0;             // Ar1: Sigma_ij = rho^|i-j|
  Eigen::MatrixXd dense;        // Dense: symmetric PSD matrix

  static CovarianceSpec identity_scaled(int p, double scale);
  static CovarianceSpec ar1(int p, double rho);
  static CovarianceSpec dense_matrix(Eigen::MatrixXd sigma);

  /// Materialize Sigma as a dense matrix.
  Eigen::MatrixXd matrix() const;
  /// Spectral norm of Sigma.
  double spectral_norm() const;
};

/// Lower-triangular F with F F' = Sigma. The AR(1) factor is built in closed
/// form; dense input is Cholesky-factored with eigenvalue clamping at -1e-10.
Eigen::MatrixXd build_covariance_factor(const CovarianceSpec& spec);

/// Two-class Gaussian mixture description.
struct MixtureSpec {
  Eigen::VectorXd mu1;
  Eigen::VectorXd mu2;
  CovarianceSpec cov;
  double pi = 0.5;  // P(label = 1)
  int n = 0;
  int p = 0;

  void validate() const;
  /// Implied scalar configuration (c11, c22, c12) of the means.
  double c11() const { return mu1.squaredNorm(); }
  double c22() const { return mu2.squaredNorm(); }
  double c12() const { return mu1.dot(mu2); }
};

struct Dataset {
  DataMatrix X;
  std::vector<int> truth;  // values in {0, 1}; 1 means the mu1 component
};

/// Labels i.i.d. Bernoulli(pi); column i = mu_{label} + F z with z standard
/// normal. Deterministic given the seed.
Dataset sample_dataset(const MixtureSpec& spec, std::uint64_t seed);

/// Same, with fixed labels (theory regimes fix the class sizes).
Dataset sample_dataset(const MixtureSpec& spec, const std::vector<int>& labels,
                       std::uint64_t seed);

/// The five simulation presets. sweep_value is p for models 1-4 and n for
/// model 5; off-grid values are rejected with the valid grid in the message.
MixtureSpec model_preset(int id, int sweep_value);
const std::vector<int>& model_grid(int id);

enum class TheoryPresetKind { ExactRecovery, LowerBound, Multiplicity };

/// Theory-regime generators:
///   ExactRecovery(eps): Sigma = I, mu1 = -mu2 spread uniformly over all p
///     coordinates with ||mu1||^2 = 2 (1 + eps) ln n.
///   LowerBound(scale):  Sigma = I, mu1 = -mu2 with ||mu1||^2 = scale.
///   Multiplicity(ratio): disjoint equal-norm supports (c12 = 0) sized so
///     that d1 = ratio * sigma_n when the classes are balanced.
MixtureSpec theory_preset(TheoryPresetKind kind, double param, int n, int p);

}  // namespace essc
