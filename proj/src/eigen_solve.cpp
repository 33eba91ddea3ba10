#include "conespec/eigen_solve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "conespec/errors.hpp"

namespace conespec {

Eigen::VectorXd BandedSym::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    y[j] += ab(0, j) * x[j];
    const int top = std::min(kd, n - 1 - j);
    for (int d = 1; d <= top; ++d) {
      y[j + d] += ab(d, j) * x[j];
      y[j] += ab(d, j) * x[j + d];
    }
  }
  return y;
}

Eigen::MatrixXd BandedSym::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int top = std::min(kd, n - 1 - j);
    for (int d = 0; d <= top; ++d) {
      A(j + d, j) = ab(d, j);
      A(j, j + d) = ab(d, j);
    }
  }
  return A;
}

namespace {

void tridiag_residuals(const Eigen::VectorXd& d, const Eigen::VectorXd& e, EigenPairs& out) {
  const int n = static_cast<int>(d.size());
  out.residuals.resize(out.values.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    Eigen::VectorXd x = out.vectors.col(static_cast<int>(k));
    Eigen::VectorXd Ax = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      Ax[i] += d[i] * x[i];
      if (i + 1 < n) {
        Ax[i] += e[i] * x[i + 1];
        Ax[i + 1] += e[i] * x[i];
      }
    }
    out.residuals[k] = (Ax - out.values[k] * x).norm() / x.norm();
  }
}

void banded_residuals(const BandedSym& A, EigenPairs& out) {
  out.residuals.resize(out.values.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    Eigen::VectorXd x = out.vectors.col(static_cast<int>(k));
    out.residuals[k] = (A.multiply(x) - out.values[k] * x).norm() / x.norm();
  }
}

}  // namespace

EigenPairs eig_tridiag_lowest(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, int nev) {
  const int n = static_cast<int>(diag.size());
  if (n < 1 || off.size() != n - 1)
    throw InvalidParameter("eig_tridiag_lowest: inconsistent matrix dimensions");
  if (nev < 1) throw InvalidParameter("eig_tridiag_lowest: nev must be positive");
  const int iu = std::min(nev, n);

  Eigen::VectorXd d = diag;
  Eigen::VectorXd e(n);  // dstevr wants length n workspace for the off-diagonal
  e.setZero();
  if (n > 1) e.head(n - 1) = off;

  lapack_int m = 0;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, iu);
  std::vector<lapack_int> isuppz(2 * std::max(1, iu));
  const double abstol = 2.0 * LAPACKE_dlamch('S');

  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                                   iu, abstol, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0)
    throw NumericalFailure("dstevr failed with info=" + std::to_string(info));

  EigenPairs out;
  out.values.assign(w.data(), w.data() + m);
  out.vectors = z.leftCols(m);
  tridiag_residuals(diag, off, out);
  return out;
}

namespace {

EigenPairs banded_solve(const BandedSym& A, char range, double vl, double vu, int il, int iu,
                        bool want_vectors) {
  const int n = A.n;
  const int ldab = A.kd + 1;
  Eigen::MatrixXd ab = A.ab;  // dsbevx overwrites the band
  // the reduction's orthogonal matrix is only referenced when vectors are wanted
  Eigen::MatrixXd q(n, want_vectors ? n : 1);
  lapack_int m = 0;
  Eigen::VectorXd w(n);
  const int zcols = want_vectors ? ((range == 'I') ? (iu - il + 1) : n) : 1;
  Eigen::MatrixXd z(n, std::max(1, zcols));
  std::vector<lapack_int> ifail(n, 0);
  const double abstol = 2.0 * LAPACKE_dlamch('S');

  lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', range, 'L', n, A.kd,
                                   ab.data(), ldab, q.data(), n, vl, vu, il, iu, abstol, &m,
                                   w.data(), z.data(), n, ifail.data());
  if (info != 0) {
    std::string msg = "dsbevx failed with info=" + std::to_string(info);
    if (info > 0) {
      msg += " (unconverged indices:";
      for (int k = 0; k < info && k < n; ++k) msg += " " + std::to_string(ifail[k]);
      msg += ")";
    }
    throw NumericalFailure(msg);
  }

  EigenPairs out;
  out.values.assign(w.data(), w.data() + m);
  if (want_vectors) {
    out.vectors = z.leftCols(m);
    banded_residuals(A, out);
  }
  return out;
}

}  // namespace

EigenPairs eig_banded_lowest(const BandedSym& A, int nev) {
  if (A.n < 1) throw InvalidParameter("eig_banded_lowest: empty matrix");
  if (nev < 1) throw InvalidParameter("eig_banded_lowest: nev must be positive");
  return banded_solve(A, 'I', 0.0, 0.0, 1, std::min(nev, A.n), true);
}

EigenPairs eig_banded_range(const BandedSym& A, double vl, double vu) {
  if (A.n < 1) throw InvalidParameter("eig_banded_range: empty matrix");
  if (!(vl < vu)) throw InvalidParameter("eig_banded_range: need vl < vu");
  return banded_solve(A, 'V', vl, vu, 0, 0, true);
}

int eig_tridiag_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                            double bound) {
  const int n = static_cast<int>(diag.size());
  if (n < 1 || off.size() != n - 1)
    throw InvalidParameter("eig_tridiag_count_below: inconsistent matrix dimensions");
  Eigen::VectorXd d = diag;
  Eigen::VectorXd e(n);
  e.setZero();
  if (n > 1) e.head(n - 1) = off;

  lapack_int m = 0;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, 1);
  std::vector<lapack_int> isuppz(2 * n);
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', n, d.data(), e.data(), -1e30,
                                   bound, 0, 0, abstol, &m, w.data(), z.data(), n, isuppz.data());
  if (info != 0)
    throw NumericalFailure("dstevr (count) failed with info=" + std::to_string(info));
  return m;
}

int eig_banded_count_below(const BandedSym& A, double bound) {
  if (A.n < 1) throw InvalidParameter("eig_banded_count_below: empty matrix");
  EigenPairs p = banded_solve(A, 'V', -1e30, bound, 0, 0, false);
  return static_cast<int>(p.values.size());
}

double eig_banded_kth(const BandedSym& A, int k) {
  if (k < 1 || k > A.n) throw InvalidParameter("eig_banded_kth: index out of range");
  EigenPairs p = banded_solve(A, 'I', 0.0, 0.0, k, k, false);
  if (p.values.empty()) throw NumericalFailure("dsbevx returned no eigenvalue");
  return p.values.front();
}

}  // namespace conespec
