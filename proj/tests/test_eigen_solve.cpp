#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "conespec/eigen_solve.hpp"
#include "conespec/errors.hpp"

using namespace conespec;

namespace {

BandedSym random_banded(int n, int kd, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  BandedSym A = BandedSym::zero(n, kd);
  for (int j = 0; j < n; ++j)
    for (int i = j; i <= std::min(n - 1, j + kd); ++i) A.at(i, j) = gauss(rng);
  // push the spectrum around a bit
  for (int j = 0; j < n; ++j) A.at(j, j) += 0.1 * j;
  return A;
}

}  // namespace

TEST_CASE("tridiagonal solver matches dense eigendecomposition") {
  std::mt19937 rng(2301);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = 60;
  Eigen::VectorXd d(n), e(n - 1);
  for (int i = 0; i < n; ++i) d[i] = gauss(rng) + 0.05 * i;
  for (int i = 0; i < n - 1; ++i) e[i] = gauss(rng);

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.diagonal() = d;
  A.diagonal(1) = e;
  A.diagonal(-1) = e;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(A);

  const int nev = 12;
  EigenPairs p = eig_tridiag_lowest(d, e, nev);
  REQUIRE(p.values.size() == nev);
  for (int k = 0; k < nev; ++k) {
    CHECK(p.values[k] == doctest::Approx(dense.eigenvalues()[k]).epsilon(1e-12));
    CHECK(p.residuals[k] <= 1e-12);
    // vectors agree up to sign
    double dot = std::abs(p.vectors.col(k).dot(dense.eigenvectors().col(k)));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(std::is_sorted(p.values.begin(), p.values.end()));

  // nev larger than n clamps
  EigenPairs all = eig_tridiag_lowest(d, e, n + 10);
  CHECK(all.values.size() == n);

  CHECK_THROWS_AS(eig_tridiag_lowest(d, e, 0), InvalidParameter);
  CHECK_THROWS_AS(eig_tridiag_lowest(d, e.head(n - 2), 3), InvalidParameter);
}

TEST_CASE("1x1 tridiagonal edge case") {
  Eigen::VectorXd d(1), e(0);
  d[0] = 3.5;
  EigenPairs p = eig_tridiag_lowest(d, e, 1);
  REQUIRE(p.values.size() == 1);
  CHECK(p.values[0] == doctest::Approx(3.5));
}

TEST_CASE("banded solver matches dense eigendecomposition") {
  std::mt19937 rng(77);
  for (int kd : {1, 2, 4}) {
    const int n = 50;
    BandedSym A = random_banded(n, kd, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(A.dense());

    const int nev = 8;
    EigenPairs p = eig_banded_lowest(A, nev);
    REQUIRE(p.values.size() == nev);
    for (int k = 0; k < nev; ++k) {
      CHECK(p.values[k] == doctest::Approx(dense.eigenvalues()[k]).epsilon(1e-11));
      CHECK(p.residuals[k] <= 1e-11);
      double dot = std::abs(p.vectors.col(k).dot(dense.eigenvectors().col(k)));
      CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("banded range query and k-th eigenvalue") {
  std::mt19937 rng(501);
  const int n = 40, kd = 3;
  BandedSym A = random_banded(n, kd, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(A.dense());
  const Eigen::VectorXd& ev = dense.eigenvalues();

  double vl = ev[5] + 1e-8, vu = ev[20] + 1e-8;
  EigenPairs p = eig_banded_range(A, vl, vu);
  CHECK(p.values.size() == 15);
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    CHECK(p.values[k] == doctest::Approx(ev[6 + static_cast<int>(k)]).epsilon(1e-11));
    CHECK(p.residuals[k] <= 1e-11);
  }

  CHECK(eig_banded_kth(A, 1) == doctest::Approx(ev[0]).epsilon(1e-11));
  CHECK(eig_banded_kth(A, n) == doctest::Approx(ev[n - 1]).epsilon(1e-11));
  CHECK_THROWS_AS(eig_banded_kth(A, 0), InvalidParameter);
  CHECK_THROWS_AS(eig_banded_range(A, 1.0, 1.0), InvalidParameter);
}

TEST_CASE("banded multiply agrees with dense multiply") {
  std::mt19937 rng(9);
  BandedSym A = random_banded(30, 2, rng);
  Eigen::VectorXd x = Eigen::VectorXd::Random(30);
  CHECK((A.multiply(x) - A.dense() * x).norm() <= 1e-13 * x.norm());
}
