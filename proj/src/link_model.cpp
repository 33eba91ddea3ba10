#include "conespec/link_model.hpp"

#include <cmath>
#include <numbers>

#include "conespec/errors.hpp"

namespace conespec {

int LinkModel::total_dim() const {
  int s = 0;
  for (int i = 0; i <= n; ++i) s += dim(i);
  return s;
}

int LinkModel::offset(int i) const {
  int s = 0;
  for (int j = 0; j < i; ++j) s += dim(j);
  return s;
}

namespace {

// Orthonormal degree-0 basis of S^1_m as trig polynomials:
// index 0 -> 1/sqrt(2 pi m), 2k-1 -> cos(k phi/m)/sqrt(pi m),
// 2k -> sin(k phi/m)/sqrt(pi m).
std::vector<TrigPoly> circle_basis(int m, int K) {
  double L = 2.0 * std::numbers::pi * m;
  std::vector<TrigPoly> basis;
  basis.push_back(TrigPoly::constant(m, 1.0 / std::sqrt(L)));
  for (int k = 1; k <= K; ++k) {
    basis.push_back(TrigPoly::cosine(m, k, 1.0 / std::sqrt(L / 2.0)));
    basis.push_back(TrigPoly::sine(m, k, 1.0 / std::sqrt(L / 2.0)));
  }
  return basis;
}

// Matrix of multiplication by p on the orthonormal basis (exact).
Eigen::MatrixXd mult_matrix(const std::vector<TrigPoly>& basis, const TrigPoly& p) {
  int d = static_cast<int>(basis.size());
  Eigen::MatrixXd M(d, d);
  for (int j = 0; j < d; ++j) {
    TrigPoly pj = p * basis[j];
    for (int i = 0; i < d; ++i) M(i, j) = basis[i].inner(pj);
  }
  return M;
}

}  // namespace

LinkModel make_circle_link(int m, int K) {
  if (m < 1) throw InvalidParameter("make_circle_link: m must be >= 1");
  if (K < 1) throw InvalidParameter("make_circle_link: K must be >= 1");

  LinkModel link;
  link.n = 1;
  link.nu = 1;
  link.circle = true;
  link.m = m;
  link.truncation = K;
  link.tolerance = 1e-10;
  link.betti = {1, 1};
  link.degrees.resize(2);

  for (int deg = 0; deg <= 1; ++deg) {
    auto& modes = link.degrees[deg];
    ModeInfo c0;
    c0.eigenvalue = 0.0;
    c0.harmonic = true;
    c0.label = deg == 0 ? "1" : "dphi";
    c0.freq = 0;
    c0.trig = 0;
    modes.push_back(c0);
    for (int k = 1; k <= K; ++k) {
      std::string arg = std::to_string(k) + "phi/" + std::to_string(m);
      double lam = static_cast<double>(k) * k / (static_cast<double>(m) * m);
      ModeInfo ck{lam, false, "cos(" + arg + ")" + (deg ? " dphi" : ""), k, 1};
      ModeInfo sk{lam, false, "sin(" + arg + ")" + (deg ? " dphi" : ""), k, 2};
      modes.push_back(ck);
      modes.push_back(sk);
    }
  }

  int d0 = link.dim(0);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d0, d0);
  for (int k = 1; k <= K; ++k) {
    double nu_k = static_cast<double>(k) / m;
    D(2 * k, 2 * k - 1) = -nu_k;  // d cos_k = -nu_k sin_k dphi
    D(2 * k - 1, 2 * k) = nu_k;   // d sin_k = +nu_k cos_k dphi
  }
  link.d_link = {D};
  link.delta_link = {D.transpose()};
  return link;
}

LinkModel make_abstract_link(int n, const std::vector<int>& betti,
                             const std::vector<std::vector<ModeInfo>>& modes,
                             const std::vector<Eigen::MatrixXd>* d_matrices,
                             double tolerance) {
  if (n < 1 || n % 2 == 0)
    throw InvalidParameter("make_abstract_link: link dimension must be odd and positive, got " +
                           std::to_string(n));
  if (static_cast<int>(betti.size()) != n + 1)
    throw InvalidParameter("make_abstract_link: betti vector must have n+1 entries");
  if (static_cast<int>(modes.size()) != n + 1)
    throw InvalidParameter("make_abstract_link: need a mode table for each degree 0..n");

  LinkModel link;
  link.n = n;
  link.nu = (n + 1) / 2;
  link.circle = false;
  link.m = 0;
  link.tolerance = tolerance;
  link.betti = betti;
  link.degrees = modes;
  int K = 0;
  for (int i = 0; i <= n; ++i) K = std::max(K, link.dim(i));
  link.truncation = K;

  for (int i = 0; i <= n; ++i) {
    int nh = 0;
    for (const auto& mode : modes[i]) {
      if (mode.eigenvalue < 0.0)
        throw InvalidParameter("make_abstract_link: negative Laplace eigenvalue in degree " +
                               std::to_string(i));
      if (mode.harmonic) ++nh;
    }
    if (nh != betti[i])
      throw ModelInconsistency("make_abstract_link: degree " + std::to_string(i) + " has " +
                               std::to_string(nh) + " harmonic modes but betti " +
                               std::to_string(betti[i]));
  }

  link.d_link.resize(n);
  for (int i = 0; i < n; ++i) {
    if (d_matrices) {
      if (static_cast<int>(d_matrices->size()) != n)
        throw InvalidParameter("make_abstract_link: need n coupling matrices");
      const Eigen::MatrixXd& D = (*d_matrices)[i];
      if (D.rows() != link.dim(i + 1) || D.cols() != link.dim(i))
        throw AssemblyError("make_abstract_link: coupling matrix for degree " +
                            std::to_string(i) + " has wrong shape");
      link.d_link[i] = D;
    } else {
      link.d_link[i] = Eigen::MatrixXd::Zero(link.dim(i + 1), link.dim(i));
    }
  }
  link.delta_link.resize(n);
  for (int i = 0; i < n; ++i) link.delta_link[i] = link.d_link[i].transpose();

  LinkDiagnostics diag = validate_link(link);
  if (diag.max_d2 > tolerance)
    throw ModelInconsistency("make_abstract_link: d~ o d~ defect " +
                             std::to_string(diag.max_d2) + " exceeds tolerance");
  if (diag.max_eigen_defect > tolerance)
    throw ModelInconsistency("make_abstract_link: Laplace eigenvalue defect " +
                             std::to_string(diag.max_eigen_defect) + " exceeds tolerance");
  return link;
}

LinkDiagnostics validate_link(const LinkModel& link) {
  LinkDiagnostics d;
  d.tolerance = link.tolerance;
  for (int i = 0; i + 1 < link.n; ++i) {
    Eigen::MatrixXd D2 = link.d_link[i + 1] * link.d_link[i];
    if (D2.size() > 0) d.max_d2 = std::max(d.max_d2, D2.cwiseAbs().maxCoeff());
  }
  for (int i = 0; i < link.n; ++i) {
    Eigen::MatrixXd A = link.delta_link[i] - link.d_link[i].transpose();
    if (A.size() > 0) d.max_adjoint_defect = std::max(d.max_adjoint_defect, A.cwiseAbs().maxCoeff());
  }
  for (int i = 0; i <= link.n; ++i) {
    int di = link.dim(i);
    if (di == 0) continue;
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(di, di);
    if (i < link.n) lap += link.delta_link[i] * link.d_link[i];
    if (i > 0) lap += link.d_link[i - 1] * link.delta_link[i - 1];
    for (int j = 0; j < di; ++j) lap(j, j) -= link.degrees[i][j].eigenvalue;
    d.max_eigen_defect = std::max(d.max_eigen_defect, lap.cwiseAbs().maxCoeff());
  }
  d.pass = d.max_d2 <= d.tolerance && d.max_adjoint_defect <= d.tolerance &&
           d.max_eigen_defect <= d.tolerance;
  return d;
}

Eigen::MatrixXd circle_mult_matrix(const LinkModel& link, const TrigPoly& p, int degree) {
  if (!link.circle) throw InvalidParameter("circle_mult_matrix: link is not a circle");
  if (degree < 0 || degree > 1)
    throw InvalidParameter("circle_mult_matrix: degree out of range");
  return mult_matrix(circle_basis(link.m, link.truncation), p);
}

MorsePotential make_circle_potential(const LinkModel& link, const TrigPoly& h) {
  if (!link.circle) throw UnsupportedOracle("make_circle_potential: link is not a circle");
  if (h.m() != link.m) throw InvalidParameter("make_circle_potential: h lives on the wrong circle");

  MorsePotential pot;
  pot.h = h;
  auto basis = circle_basis(link.m, link.truncation);
  pot.h_coeffs.resize(basis.size());
  for (size_t i = 0; i < basis.size(); ++i) pot.h_coeffs[i] = basis[i].inner(h);

  Eigen::MatrixXd Mh = mult_matrix(basis, h);
  Eigen::MatrixXd Mdh = mult_matrix(basis, h.derivative());
  pot.mult_h = {Mh, Mh};  // 1-form coefficients multiply the same way
  pot.wedge_dh = {Mdh};
  pot.contract_gradh = {Mdh.transpose()};

  // Dense sample of the admissibility bound h^2 + |h'|^2 >= a^2.
  TrigPoly hp = h.derivative();
  int samples = std::max(10 * link.truncation * link.m, 64);
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double phi = 2.0 * std::numbers::pi * link.m * i / samples;
    double v = h.eval(phi), w = hp.eval(phi);
    mn = std::min(mn, v * v + w * w);
  }
  if (!(mn > 1e-12))
    throw InvalidParameter("make_circle_potential: h is not admissible (h^2 + |h'|^2 reaches " +
                           std::to_string(mn) + ")");
  pot.lower_bound_a = std::sqrt(mn);
  return pot;
}

MorsePotential make_constant_potential(const LinkModel& link, double c) {
  if (c == 0.0) throw InvalidParameter("make_constant_potential: h = 0 is not admissible");
  MorsePotential pot;
  pot.constant = true;
  pot.constant_value = c;
  pot.lower_bound_a = std::abs(c);
  if (link.circle) {
    pot.h = TrigPoly::constant(link.m, c);
    double L = 2.0 * std::numbers::pi * link.m;
    pot.h_coeffs.assign(link.dim(0), 0.0);
    pot.h_coeffs[0] = c * std::sqrt(L);
  } else {
    pot.h_coeffs.assign(link.dim(0), 0.0);
    if (link.dim(0) > 0) pot.h_coeffs[0] = c;  // scale of the first basis vector is abstract
  }
  pot.mult_h.resize(link.n + 1);
  for (int i = 0; i <= link.n; ++i)
    pot.mult_h[i] = c * Eigen::MatrixXd::Identity(link.dim(i), link.dim(i));
  pot.wedge_dh.resize(link.n);
  pot.contract_gradh.resize(link.n);
  for (int i = 0; i < link.n; ++i) {
    pot.wedge_dh[i] = Eigen::MatrixXd::Zero(link.dim(i + 1), link.dim(i));
    pot.contract_gradh[i] = pot.wedge_dh[i].transpose();
  }
  return pot;
}

}  // namespace conespec
