#include "essc/core_linalg.hpp"

#include <cmath>
#include <string>

namespace essc {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Eigen::VectorXd unit_orthogonal_to(const Eigen::VectorXd& u) {
  // deterministic vector orthogonal to u: perturb the basis vector where u is
  // smallest in magnitude, then Gram-Schmidt
  int idx = 0;
  u.cwiseAbs().minCoeff(&idx);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(u.size());
  e(idx) = 1.0;
  Eigen::VectorXd v = e - u.dot(e) * u;
  double norm = v.norm();
  if (norm == 0.0) throw std::runtime_error("cannot build orthogonal vector");
  return v / norm;
}

SpectralSummary finalize(double t1, double t2, Eigen::VectorXd u1, Eigen::VectorXd u2) {
  canonicalize_sign(u1);
  canonicalize_sign(u2);
  SpectralSummary s;
  s.t1 = t1;
  s.t2 = t2;
  s.u1 = std::move(u1);
  s.u2 = std::move(u2);
  s.fstat = flatness_stat(s.u1);
  return s;
}

}  // namespace

void DataMatrix::validate() const {
  if (n() < 2) throw std::invalid_argument("DataMatrix: need n >= 2 samples");
  if (p() < 1) throw std::invalid_argument("DataMatrix: need p >= 1 features");
  if (!values.allFinite()) throw std::invalid_argument("DataMatrix: non-finite entries");
}

double flatness_stat(const Eigen::VectorXd& u) {
  const double n = static_cast<double>(u.size());
  return std::abs(u.sum()) / std::sqrt(2.0 * n) - 1.0 / kSqrt2;
}

void canonicalize_sign(Eigen::VectorXd& u) {
  const double s = u.sum();
  if (s < 0.0) {
    u = -u;
    return;
  }
  if (s == 0.0) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u(i) != 0.0) {
        if (u(i) < 0.0) u = -u;
        return;
      }
    }
  }
}

SpectralSummary top2_singular(const DataMatrix& X) {
  X.validate();
  const int n = X.n();
  const int p = X.p();
  const Eigen::MatrixXd& A = X.values;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  const bool sample_side = (n <= p);
  if (sample_side) {
    es.compute(Eigen::MatrixXd(A.transpose() * A));
  } else {
    es.compute(Eigen::MatrixXd(A * A.transpose()));
  }
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("top2_singular: eigensolver failed to converge");
  }
  const int m = sample_side ? n : p;
  const double lam1 = std::max(es.eigenvalues()(m - 1), 0.0);
  const double lam2 = (m >= 2) ? std::max(es.eigenvalues()(m - 2), 0.0) : 0.0;
  const double t1 = std::sqrt(lam1);
  const double t2 = std::sqrt(lam2);

  Eigen::VectorXd u1, u2;
  if (sample_side) {
    u1 = es.eigenvectors().col(m - 1);
    u2 = (m >= 2) ? Eigen::VectorXd(es.eigenvectors().col(m - 2))
                  : unit_orthogonal_to(u1);
  } else {
    // recover the right singular vector from the left one: u = A^T w / t
    const double tiny = 1e-14 * std::max(t1, 1.0);
    auto recover = [&](int col, double t, const Eigen::VectorXd* other) {
      if (t > tiny) {
        Eigen::VectorXd u = A.transpose() * es.eigenvectors().col(col) / t;
        return Eigen::VectorXd(u / u.norm());
      }
      if (other != nullptr) return unit_orthogonal_to(*other);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e(0) = 1.0;
      return e;
    };
    u1 = recover(p - 1, t1, nullptr);
    u2 = recover(p - 2, t2, &u1);
  }
  return finalize(t1, t2, std::move(u1), std::move(u2));
}

SpectralSummary linearization_eigs(const DataMatrix& X) {
  X.validate();
  const int n = X.n();
  const int p = X.p();
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n + p, n + p);
  Z.topRightCorner(n, p) = X.values.transpose();
  Z.bottomLeftCorner(p, n) = X.values;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("linearization_eigs: eigensolver failed to converge");
  }
  const int m = n + p;
  const double t1 = std::max(es.eigenvalues()(m - 1), 0.0);
  const double t2 = std::max(es.eigenvalues()(m - 2), 0.0);

  // the first n entries of a top eigenvector of Z equal u / sqrt(2)
  auto extract = [&](int col, double t, const Eigen::VectorXd* other) {
    Eigen::VectorXd u = es.eigenvectors().col(col).head(n) * kSqrt2;
    const double norm = u.norm();
    if (norm < 1e-8 && t <= 1e-12 && other != nullptr) {
      // null singular value: the sample block of the eigenvector is not
      // determined; fall back to the same deterministic completion as
      // top2_singular
      return unit_orthogonal_to(*other);
    }
    return Eigen::VectorXd(u / norm);
  };
  Eigen::VectorXd u1 = extract(m - 1, t1, nullptr);
  Eigen::VectorXd u2 = extract(m - 2, t2, &u1);
  return finalize(t1, t2, std::move(u1), std::move(u2));
}

double operator_norm(const Eigen::MatrixXd& A) {
  const bool tall = A.rows() >= A.cols();
  Eigen::MatrixXd G = tall ? Eigen::MatrixXd(A.transpose() * A)
                           : Eigen::MatrixXd(A * A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace essc
