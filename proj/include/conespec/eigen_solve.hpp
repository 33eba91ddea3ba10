#pragma once

#include <Eigen/Dense>
#include <vector>

namespace conespec {

// Symmetric banded matrix, LAPACK lower-band column-major storage:
// ab(i - j, j) = A(i, j) for j <= i <= min(n-1, j + kd).
struct BandedSym {
  int n = 0, kd = 0;
  Eigen::MatrixXd ab;  // (kd + 1) x n

  static BandedSym zero(int n, int kd) {
    BandedSym b;
    b.n = n;
    b.kd = kd;
    b.ab = Eigen::MatrixXd::Zero(kd + 1, n);
    return b;
  }
  // i >= j required, i - j <= kd
  double& at(int i, int j) { return ab(i - j, j); }
  double at(int i, int j) const { return ab(i - j, j); }
  void add(int i, int j, double v) {  // symmetric accumulate, any order
    if (i < j) std::swap(i, j);
    ab(i - j, j) += v;
  }
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;
};

struct EigenPairs {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // n x found
  std::vector<double> residuals;  // ||A x - lambda x||_2 / ||x||_2
};

// Lowest nev eigenpairs of a symmetric tridiagonal matrix.
EigenPairs eig_tridiag_lowest(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, int nev);

// Lowest nev eigenpairs of a symmetric banded matrix.
EigenPairs eig_banded_lowest(const BandedSym& A, int nev);

// All eigenpairs with eigenvalue in (vl, vu].
EigenPairs eig_banded_range(const BandedSym& A, double vl, double vu);

// k-th smallest eigenvalue (1-based); no vectors.
double eig_banded_kth(const BandedSym& A, int k);

// Number of eigenvalues strictly below `bound`.
int eig_tridiag_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double bound);
int eig_banded_count_below(const BandedSym& A, double bound);

}  // namespace conespec
