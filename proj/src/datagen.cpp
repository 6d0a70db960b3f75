#include "essc/datagen.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "essc/rng.hpp"

namespace essc {

CovarianceSpec CovarianceSpec::identity_scaled(int p, double scale) {
  if (p < 1 || scale < 0.0) throw std::invalid_argument("CovarianceSpec: invalid identity spec");
  CovarianceSpec s;
  s.kind = Kind::IdentityScaled;
  s.p = p;
  s.scale = scale;
  return s;
}

CovarianceSpec CovarianceSpec::ar1(int p, double rho) {
  if (p < 1 || std::abs(rho) >= 1.0) throw std::invalid_argument("CovarianceSpec: AR1 needs |rho| < 1");
  CovarianceSpec s;
  s.kind = Kind::Ar1;
  s.p = p;
  s.rho = rho;
  return s;
}

CovarianceSpec CovarianceSpec::dense_matrix(Eigen::MatrixXd sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw std::invalid_argument("CovarianceSpec: dense matrix must be square");
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw std::invalid_argument("CovarianceSpec: dense matrix must be symmetric");
  }
  CovarianceSpec s;
  s.kind = Kind::Dense;
  s.p = static_cast<int>(sigma.rows());
  s.dense = std::move(sigma);
  return s;
}

Eigen::MatrixXd CovarianceSpec::matrix() const {
  switch (kind) {
    case Kind::IdentityScaled:
      return scale * Eigen::MatrixXd::Identity(p, p);
    case Kind::Ar1: {
      Eigen::MatrixXd m(p, p);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = std::pow(rho, std::abs(i - j));
      return m;
    }
    case Kind::Dense:
      return dense;
  }
  throw std::logic_error("unreachable");
}

double CovarianceSpec::spectral_norm() const {
  switch (kind) {
    case Kind::IdentityScaled:
      return scale;
    default: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix(), Eigen::EigenvaluesOnly);
      return std::max(std::abs(es.eigenvalues().maxCoeff()),
                      std::abs(es.eigenvalues().minCoeff()));
    }
  }
}

Eigen::MatrixXd build_covariance_factor(const CovarianceSpec& spec) {
  switch (spec.kind) {
    case CovarianceSpec::Kind::IdentityScaled:
      return std::sqrt(spec.scale) * Eigen::MatrixXd::Identity(spec.p, spec.p);
    case CovarianceSpec::Kind::Ar1: {
      // closed-form factor of the AR(1) correlation matrix: first column is
      // rho^i, later columns scaled by sqrt(1 - rho^2)
      Eigen::MatrixXd F = Eigen::MatrixXd::Zero(spec.p, spec.p);
      const double s = std::sqrt(1.0 - spec.rho * spec.rho);
      for (int i = 0; i < spec.p; ++i) {
        F(i, 0) = std::pow(spec.rho, i);
        for (int j = 1; j <= i; ++j) F(i, j) = s * std::pow(spec.rho, i - j);
      }
      return F;
    }
    case CovarianceSpec::Kind::Dense: {
      Eigen::LLT<Eigen::MatrixXd> llt(spec.dense);
      if (llt.info() == Eigen::Success) return llt.matrixL();
      // not numerically PD: clamp tiny negative eigenvalues and refactor
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.dense);
      if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("build_covariance_factor: matrix is not PSD");
      }
      const Eigen::VectorXd clamped = es.eigenvalues().cwiseMax(0.0);
      return es.eigenvectors() * clamped.cwiseSqrt().asDiagonal();
    }
  }
  throw std::logic_error("unreachable");
}

void MixtureSpec::validate() const {
  if (n < 2 || p < 1) throw std::invalid_argument("MixtureSpec: need n >= 2, p >= 1");
  if (mu1.size() != p || mu2.size() != p) throw std::invalid_argument("MixtureSpec: mean dimension mismatch");
  if (cov.p != p) throw std::invalid_argument("MixtureSpec: covariance dimension mismatch");
  if (pi <= 0.0 || pi >= 1.0) throw std::invalid_argument("MixtureSpec: pi in (0,1)");
  if ((mu1 - mu2).norm() == 0.0) throw std::invalid_argument("MixtureSpec: mu1 must differ from mu2");
}

namespace {

Dataset sample_with_labels(const MixtureSpec& spec, std::vector<int> labels,
                           std::uint64_t noise_seed) {
  // scaled-identity noise skips the dense p x p factor multiply per column
  const bool scaled_identity =
      spec.cov.kind == CovarianceSpec::Kind::IdentityScaled;
  const Eigen::MatrixXd F =
      scaled_identity ? Eigen::MatrixXd() : build_covariance_factor(spec.cov);
  const double sd = scaled_identity ? std::sqrt(spec.cov.scale) : 0.0;
  Rng rng(noise_seed);
  Eigen::MatrixXd X(spec.p, spec.n);
  Eigen::VectorXd z(spec.p);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.p; ++j) z(j) = rng.normal();
    const Eigen::VectorXd& mu = labels[i] == 1 ? spec.mu1 : spec.mu2;
    if (scaled_identity) {
      X.col(i) = mu + sd * z;
    } else {
      X.col(i) = mu + F * z;
    }
  }
  return {DataMatrix{std::move(X)}, std::move(labels)};
}

}  // namespace

Dataset sample_dataset(const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng label_rng(child_seed(seed, 0x6c6162656cULL, 0));
  std::vector<int> labels(spec.n);
  for (int i = 0; i < spec.n; ++i) labels[i] = label_rng.bernoulli(spec.pi) ? 1 : 0;
  return sample_with_labels(spec, std::move(labels), child_seed(seed, 0x6e6f697365ULL, 0));
}

Dataset sample_dataset(const MixtureSpec& spec, const std::vector<int>& labels,
                       std::uint64_t seed) {
  spec.validate();
  if (static_cast<int>(labels.size()) != spec.n) {
    throw std::invalid_argument("sample_dataset: label length mismatch");
  }
  return sample_with_labels(spec, labels, child_seed(seed, 0x6e6f697365ULL, 0));
}

namespace {

Eigen::VectorXd support_vector(int p, int offset, int len, double value) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  v.segment(offset, len).setConstant(value);
  return v;
}

const std::vector<int> kGrid14{100, 200, 400, 600, 800, 1000, 1200};
const std::vector<int> kGrid4{30, 50, 100, 200, 400, 600, 800};
const std::vector<int> kGrid5{200, 400, 600, 800, 1000};

void check_grid(int id, int value, const std::vector<int>& grid) {
  for (int g : grid)
    if (g == value) return;
  std::ostringstream msg;
  msg << "model_preset: sweep value " << value << " is off-grid for model " << id
      << "; valid values:";
  for (int g : grid) msg << ' ' << g;
  throw std::invalid_argument(msg.str());
}

}  // namespace

const std::vector<int>& model_grid(int id) {
  switch (id) {
    case 1:
    case 2:
    case 3:
      return kGrid14;
    case 4:
      return kGrid4;
    case 5:
      return kGrid5;
    default:
      throw std::invalid_argument("model_grid: id must be 1..5");
  }
}

MixtureSpec model_preset(int id, int sweep_value) {
  check_grid(id, sweep_value, model_grid(id));
  MixtureSpec s;
  s.pi = 0.5;
  switch (id) {
    case 1: {  // mu2 = 0, AR(1) noise
      s.n = 200;
      s.p = sweep_value;
      const int l = 15;
      const double r = 2.0;
      s.mu1 = support_vector(s.p, 0, l, r);
      s.mu2 = Eigen::VectorXd::Zero(s.p);
      s.cov = CovarianceSpec::ar1(s.p, 0.8);
      break;
    }
    case 2: {  // disjoint supports, Sigma = r^2 I
      s.n = 100;
      s.p = sweep_value;
      const int l = 12;
      const double r = 2.0;
      s.mu1 = support_vector(s.p, 0, l, r);
      s.mu2 = support_vector(s.p, s.p - l, l, r);
      s.cov = CovarianceSpec::identity_scaled(s.p, r * r);
      break;
    }
    case 3: {  // mu2 = mu1 / 2, Sigma = I
      s.n = 200;
      s.p = sweep_value;
      const int l = 60;
      s.mu1 = support_vector(s.p, 0, l, 1.0);
      s.mu2 = 0.5 * s.mu1;
      s.cov = CovarianceSpec::identity_scaled(s.p, 1.0);
      break;
    }
    case 4: {  // model 3 with l = 30 and its own p grid
      s.n = 200;
      s.p = sweep_value;
      const int l = 30;
      s.mu1 = support_vector(s.p, 0, l, 1.0);
      s.mu2 = 0.5 * s.mu1;
      s.cov = CovarianceSpec::identity_scaled(s.p, 1.0);
      break;
    }
    case 5: {  // n sweep; mu2 supported on the first l/2 coordinates
      s.n = sweep_value;
      s.p = 400;
      const int l = 20;
      const double r = 1.0;
      s.mu1 = support_vector(s.p, 0, l, r);
      s.mu2 = support_vector(s.p, 0, l / 2, 1.0 / r);
      s.cov = CovarianceSpec::identity_scaled(s.p, r * r);
      break;
    }
    default:
      throw std::invalid_argument("model_preset: id must be 1..5");
  }
  return s;
}

MixtureSpec theory_preset(TheoryPresetKind kind, double param, int n, int p) {
  if (n < 2 || p < 2) throw std::invalid_argument("theory_preset: need n >= 2, p >= 2");
  MixtureSpec s;
  s.n = n;
  s.p = p;
  s.pi = 0.5;
  s.cov = CovarianceSpec::identity_scaled(p, 1.0);
  switch (kind) {
    case TheoryPresetKind::ExactRecovery: {
      if (param <= 0.0) throw std::invalid_argument("theory_preset: eps must be positive");
      const double c11 = 2.0 * (1.0 + param) * std::log(static_cast<double>(n));
      s.mu1 = Eigen::VectorXd::Constant(p, std::sqrt(c11 / p));
      s.mu2 = -s.mu1;
      return s;
    }
    case TheoryPresetKind::LowerBound: {
      if (param <= 0.0) throw std::invalid_argument("theory_preset: scale must be positive");
      s.mu1 = Eigen::VectorXd::Constant(p, std::sqrt(param / p));
      s.mu2 = -s.mu1;
      return s;
    }
    case TheoryPresetKind::Multiplicity: {
      const double ratio = param > 0.0 ? param : 4.0;  // d1 / sigma_n
      const int l = p / 2;
      if (l < 1) throw std::invalid_argument("theory_preset: p too small for disjoint supports");
      const double sigma_n = std::sqrt(static_cast<double>(n + p));
      const double d1sq = ratio * ratio * sigma_n * sigma_n;
      const double c11 = d1sq / (n / 2.0);  // multiplicity at n1 = n2 = n/2
      const double a = std::sqrt(c11 / l);
      s.mu1 = support_vector(p, 0, l, a);
      s.mu2 = support_vector(p, p - l, l, a);
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace essc
