#pragma once

// Independent numerical oracles used by the test suite. These deliberately
// avoid the library's own coefficient arithmetic: quadrature instead of
// trig-coefficient products, finite differences instead of closed forms,
// dense rank computations instead of structural counting.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracles {

// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Orthonormal basis functions of S^1_m (length 2*pi*m) and their derivatives,
// as plain closures: index 0 -> constant, 2k-1 -> cos(k phi/m), 2k -> sin.
struct CircleBasis {
  int m, K;
  double length() const { return 2.0 * std::numbers::pi * m; }
  int dim() const { return 2 * K + 1; }
  std::function<double(double)> fn(int i) const {
    double L = length();
    if (i == 0) return [L](double) { return 1.0 / std::sqrt(L); };
    int k = (i + 1) / 2;
    double nu = static_cast<double>(k) / m, c = 1.0 / std::sqrt(L / 2.0);
    if (i % 2) return [nu, c](double p) { return c * std::cos(nu * p); };
    return [nu, c](double p) { return c * std::sin(nu * p); };
  }
  std::function<double(double)> dfn(int i) const {
    double L = length();
    if (i == 0) return [](double) { return 0.0; };
    int k = (i + 1) / 2;
    double nu = static_cast<double>(k) / m, c = 1.0 / std::sqrt(L / 2.0);
    if (i % 2) return [nu, c](double p) { return -c * nu * std::sin(nu * p); };
    return [nu, c](double p) { return c * nu * std::cos(nu * p); };
  }
  // <f_i, g> over the circle by quadrature.
  double inner(const std::function<double(double)>& f, const std::function<double(double)>& g,
               int n = 20000) const {
    return simpson([&](double p) { return f(p) * g(p); }, 0.0, length(), n);
  }
};

inline int rank_svd(const Eigen::MatrixXd& A, double tol = 1e-9) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

// Sixth-order central first/second derivatives on a uniform stencil.
inline double d1_6(const std::function<double(double)>& f, double x, double h) {
  return (-f(x - 3 * h) + 9 * f(x - 2 * h) - 45 * f(x - h) + 45 * f(x + h) - 9 * f(x + 2 * h) +
          f(x + 3 * h)) /
         (60 * h);
}
inline double d2_6(const std::function<double(double)>& f, double x, double h) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) + 270 * f(x + h) -
          27 * f(x + 2 * h) + 2 * f(x + 3 * h)) /
         (180 * h * h);
}

}  // namespace oracles
