#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "essc/core_linalg.hpp"
#include "essc/datagen.hpp"
#include "essc/rng.hpp"

using namespace essc;

namespace {

Eigen::MatrixXd random_gaussian(int p, int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(p, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < p; ++i) X(i, j) = rng.normal();
  return X;
}

double vector_mismatch(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 1.0 - std::abs(a.dot(b));
}

}  // namespace

TEST_CASE("top2_singular on a diagonal matrix") {
  Eigen::MatrixXd X(2, 2);
  X << 5, 0, 0, 3;
  const SpectralSummary s = top2_singular(DataMatrix{X});
  CHECK(s.t1 == doctest::Approx(5.0));
  CHECK(s.t2 == doctest::Approx(3.0));
  CHECK(s.u1(0) == doctest::Approx(1.0));
  CHECK(s.u1(1) == doctest::Approx(0.0));
  CHECK(s.u2(0) == doctest::Approx(0.0));
  CHECK(s.u2(1) == doctest::Approx(1.0));
}

TEST_CASE("top2_singular on a rank-one constant matrix") {
  const Eigen::MatrixXd X = 2.0 * Eigen::MatrixXd::Ones(3, 4);
  const SpectralSummary s = top2_singular(DataMatrix{X});
  CHECK(s.t1 == doctest::Approx(2.0 * std::sqrt(12.0)));
  CHECK(s.t2 == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(s.u1(i) == doctest::Approx(0.5));
  CHECK(std::abs(s.fstat) <= 1e-12);
}

TEST_CASE("top2_singular matches a dense SVD oracle") {
  const Eigen::MatrixXd X = random_gaussian(40, 30, 11);
  const SpectralSummary s = top2_singular(DataMatrix{X});

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullV);
  CHECK(std::abs(s.t1 - svd.singularValues()(0)) <= 1e-8 * svd.singularValues()(0));
  CHECK(std::abs(s.t2 - svd.singularValues()(1)) <= 1e-8 * svd.singularValues()(0));
  CHECK(vector_mismatch(s.u1, svd.matrixV().col(0)) <= 1e-8);
  CHECK(vector_mismatch(s.u2, svd.matrixV().col(1)) <= 1e-8);
}

TEST_CASE("spectral summary invariants hold on random input") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Eigen::MatrixXd X = random_gaussian(15, 35, seed);  // n > p branch
    const SpectralSummary s = top2_singular(DataMatrix{X});
    CHECK(s.t1 >= s.t2);
    CHECK(s.t2 >= 0.0);
    CHECK(std::abs(s.u1.norm() - 1.0) <= 1e-10);
    CHECK(std::abs(s.u2.norm() - 1.0) <= 1e-10);
    CHECK(std::abs(s.u1.dot(s.u2)) <= 1e-8);
    CHECK(s.u1.sum() >= 0.0);
    CHECK(s.fstat ==
          doctest::Approx(std::abs(s.u1.sum()) / std::sqrt(2.0 * s.u1.size()) -
                          1.0 / std::sqrt(2.0))
              .epsilon(1e-10));
  }
}

TEST_CASE("linearization path equals the Gram path on a diagonal matrix") {
  Eigen::MatrixXd X(2, 2);
  X << 5, 0, 0, 3;
  const SpectralSummary a = top2_singular(DataMatrix{X});
  const SpectralSummary b = linearization_eigs(DataMatrix{X});
  CHECK(b.t1 == doctest::Approx(a.t1));
  CHECK(b.t2 == doctest::Approx(a.t2));
  CHECK((a.u1 - b.u1).norm() <= 1e-10);
  CHECK((a.u2 - b.u2).norm() <= 1e-10);
}

TEST_CASE("block matrix spectrum is symmetric about zero") {
  Eigen::MatrixXd X(2, 2);
  X << 5, 0, 0, 3;
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(4, 4);
  Z.topRightCorner(2, 2) = X.transpose();
  Z.bottomLeftCorner(2, 2) = X;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-5.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-3.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(5.0));
}

TEST_CASE("both eigen paths agree on random matrices") {
  for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
    const Eigen::MatrixXd X = random_gaussian(25, 20, seed);
    const SpectralSummary a = top2_singular(DataMatrix{X});
    const SpectralSummary b = linearization_eigs(DataMatrix{X});
    CHECK(std::abs(a.t1 - b.t1) <= 1e-8 * std::max(a.t1, 1.0));
    CHECK(std::abs(a.t2 - b.t2) <= 1e-8 * std::max(a.t1, 1.0));
    CHECK(vector_mismatch(a.u1, b.u1) <= 1e-8);
    CHECK(vector_mismatch(a.u2, b.u2) <= 1e-8);
  }
}

TEST_CASE("Weyl perturbation sanity on a sampled mixture") {
  const int n = 60, p = 40;
  MixtureSpec spec;
  spec.n = n;
  spec.p = p;
  spec.pi = 0.5;
  spec.cov = CovarianceSpec::identity_scaled(p, 1.0);
  spec.mu1 = Eigen::VectorXd::Zero(p);
  spec.mu2 = Eigen::VectorXd::Zero(p);
  spec.mu1.head(10).setConstant(3.0);
  spec.mu2.tail(10).setConstant(2.0);

  std::vector<int> labels(n, 0);
  for (int i = 0; i < n / 2; ++i) labels[i] = 1;
  const Dataset d = sample_dataset(spec, labels, 42);

  // noiseless singular values of the mean matrix
  Eigen::MatrixXd M(p, n);
  for (int i = 0; i < n; ++i) M.col(i) = labels[i] == 1 ? spec.mu1 : spec.mu2;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const double d1 = svd.singularValues()(0);
  const double d2 = svd.singularValues()(1);

  const double wnorm = operator_norm(d.X.values - M);
  const SpectralSummary s = top2_singular(d.X);
  CHECK(std::abs(s.t1 - d1) <= wnorm + 1e-10);
  CHECK(std::abs(s.t2 - d2) <= wnorm + 1e-10);
}

TEST_CASE("pure-noise operator norm satisfies the concentration bound") {
  const int n = 200, p = 200, draws = 200;
  const double bound = 1.5 * (std::sqrt(static_cast<double>(n)) +
                              std::sqrt(static_cast<double>(p)));
  int ok = 0;
  for (int r = 0; r < draws; ++r) {
    const Eigen::MatrixXd W = random_gaussian(p, n, 1000 + r);
    if (operator_norm(W) <= bound) ++ok;
  }
  CHECK(ok >= 198);  // >= 99% of draws
}

TEST_CASE("flatness statistic of the exactly flat vector is zero") {
  const int n = 37;
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  CHECK(std::abs(flatness_stat(u)) <= 1e-12);
}

TEST_CASE("sign canonicalization") {
  Eigen::VectorXd u(3);
  u << -0.5, -0.5, 0.1;
  canonicalize_sign(u);
  CHECK(u.sum() >= 0.0);

  Eigen::VectorXd v(2);
  v << -1.0, 1.0;  // zero sum: first nonzero entry must become positive
  canonicalize_sign(v);
  CHECK(v(0) == doctest::Approx(1.0));
}

TEST_CASE("data matrix validation errors") {
  CHECK_THROWS_AS(DataMatrix{Eigen::MatrixXd::Ones(3, 1)}.validate(), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 3);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(DataMatrix{bad}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(top2_singular(DataMatrix{bad}), std::invalid_argument);
}
