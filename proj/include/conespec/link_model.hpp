#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "conespec/trig_poly.hpp"

namespace conespec {

struct ModeInfo {
  double eigenvalue = 0.0;  // link-Laplace eigenvalue of the mode
  bool harmonic = false;
  std::string label;
  // Circle-link provenance (used downstream to identify Fourier sectors):
  int freq = 0;  // harmonic index k (frequency k/m); 0 for the constant mode
  int trig = 0;  // 0 = constant, 1 = cos, 2 = sin
};

// Finite spectral model of an odd-dimensional link manifold L.
// Bases are orthonormal; all adjoints are plain transposes.
struct LinkModel {
  int n = 1;   // dim L, odd
  int nu = 1;  // (n + 1) / 2
  bool circle = false;
  int m = 0;           // circle multiplicity (0 for abstract links)
  int truncation = 0;  // K, retained eigenmodes per degree
  double tolerance = 1e-10;
  std::vector<std::vector<ModeInfo>> degrees;  // n+1 per-degree bases
  std::vector<int> betti;                      // b_0 .. b_n
  // d_link[i] : degree i -> degree i+1 (rows = dim(i+1), cols = dim(i)).
  std::vector<Eigen::MatrixXd> d_link;
  // delta_link[i] = d_link[i]^T : degree i+1 -> degree i.
  std::vector<Eigen::MatrixXd> delta_link;

  int dim(int i) const { return static_cast<int>(degrees[i].size()); }
  int total_dim() const;
  int offset(int i) const;  // start of the degree-i slot in the full tuple
};

struct LinkDiagnostics {
  double max_d2 = 0.0;              // max |d~ d~|
  double max_adjoint_defect = 0.0;  // max |delta~ - d~^T|
  double max_eigen_defect = 0.0;    // max |(d~ delta~ + delta~ d~) - diag(eig)|
  double tolerance = 1e-10;
  bool pass = false;
};

// Circle S^1_m of circumference 2*pi*m. Degree-0 basis
// {1, cos(k phi/m), sin(k phi/m) : 1 <= k <= K}, orthonormalized; degree-1
// basis the Hodge-dual family (same coefficients times dphi).
LinkModel make_circle_link(int m, int K);

// Abstract link wrapping user-supplied spectra. Modes are given per degree;
// d matrices are optional (zero when absent, which is exact for
// harmonic-only truncations). Invariants are validated eagerly.
LinkModel make_abstract_link(int n, const std::vector<int>& betti,
                             const std::vector<std::vector<ModeInfo>>& modes,
                             const std::vector<Eigen::MatrixXd>* d_matrices = nullptr,
                             double tolerance = 1e-8);

LinkDiagnostics validate_link(const LinkModel& link);

// Link Morse function h and the operator matrices it induces.
struct MorsePotential {
  std::vector<double> h_coeffs;  // h in the (orthonormal) degree-0 basis
  std::vector<Eigen::MatrixXd> mult_h;          // per degree i, square
  std::vector<Eigen::MatrixXd> wedge_dh;        // i -> i+1
  std::vector<Eigen::MatrixXd> contract_gradh;  // i+1 -> i, = wedge_dh[i]^T
  double lower_bound_a = 0.0;  // h^2 + |grad h|^2 >= a^2 on the link
  bool constant = false;
  double constant_value = 0.0;
  std::optional<TrigPoly> h;  // circle links only
};

// h given as a trigonometric polynomial on the circle link.
MorsePotential make_circle_potential(const LinkModel& link, const TrigPoly& h);

// Matrix of multiplication by p on the degree-i basis of a circle link
// (exact; the two degrees share one coefficient basis).
Eigen::MatrixXd circle_mult_matrix(const LinkModel& link, const TrigPoly& p, int degree);

// h constant (any link). The admissibility constant is |c|.
MorsePotential make_constant_potential(const LinkModel& link, double c);

}  // namespace conespec
