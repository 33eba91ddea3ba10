#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "conespec/eigen_solve.hpp"
#include "conespec/link_model.hpp"

namespace conespec {

// ---------------------------------------------------------------------------
// Tuple-space ingredients of the separated model operator.
//
// A coefficient tuple stacks one copy of each link form degree
// (phi_0, ..., phi_n).  S0 is tridiagonal by degree with diagonal blocks
// c_i = (-1)^i (i - n/2) and off-diagonal blocks d / d^T; T collects the
// potential (diagonal (-1)^i h, off-diagonal dh wedge / grad-h contraction);
// Mh is the anticommutator T S0 + S0 T, assembled here in its degree-diagonal
// closed form so the product identity stays an independent check; Tsq is
// multiplication by h^2 + |grad h|^2.
// ---------------------------------------------------------------------------
Eigen::MatrixXd build_S0(const LinkModel& link);
Eigen::MatrixXd build_T(const LinkModel& link, const MorsePotential& pot);
Eigen::MatrixXd build_Mh(const LinkModel& link, const MorsePotential& pot);
Eigen::MatrixXd build_Tsq(const LinkModel& link, const MorsePotential& pot);

struct ModelAssembly {
  LinkModel link;
  MorsePotential pot;
  double t = 1.0;
  Eigen::MatrixXd S0, T, Mh, Tsq;
  // degree k in 0..n+1 couples the slots (phi_{k-1}, phi_k)
  std::vector<std::vector<int>> degree_blocks;
  bool standard_curve = false;  // circle link with h = cos(phi) exactly

  int nu() const { return link.nu; }
};

ModelAssembly make_assembly(const LinkModel& link, const MorsePotential& pot, double t);

// ---------------------------------------------------------------------------
// Radial grid.  All radial assembly happens in the scaled coordinate
// sigma = t r, where the operator becomes t^2 * (-d^2 + q/sigma^2 + Q/sigma + R)
// with t-independent coefficients; reported eigenvalues are t^2 times the
// sigma-unit ones.  Nodes are cell midpoints of the interface partition.
// ---------------------------------------------------------------------------
enum class GridScheme { graded, uniform };

struct RadialGrid {
  int N = 0;
  GridScheme scheme = GridScheme::graded;
  double sigma_max = 0.0;
  double grading = 5.0;
  std::vector<double> iface;  // N+1 interfaces, iface[0] = 0
  std::vector<double> node;   // N midpoints
};

RadialGrid make_radial_grid(double sigma_max, int N, GridScheme scheme = GridScheme::graded,
                            double grading = 5.0);
RadialGrid grid_from_interfaces(std::vector<double> iface);
// domain size keeping truncation effects below kernel tolerances
double default_sigma_max(const LinkModel& link, const MorsePotential& pot);

// ---------------------------------------------------------------------------
// Mode decomposition of one degree block.
// ---------------------------------------------------------------------------
enum class BCType { friedrichs, branch_matched };

struct ModeRecord {
  double q = 0.0;      // 1/sigma^2 coefficient
  double mu = 0.0;     // sqrt(q + 1/4)
  double alpha = 0.0;  // decaying indicial exponent 1/2 + mu
  double decay = 1.0;  // Friedrichs weight decay rate
  bool borderline = false;  // both indicial branches square-integrable
  BCType bc = BCType::friedrichs;
  int sector = -1;  // common Fourier sector on circle links, -1 if mixed
};

struct ModeComponent {
  std::vector<int> tuple_indices;   // rows of the degree block it lives on
  Eigen::MatrixXd basis;            // |tuple_indices| x F orthonormal columns
  std::vector<ModeRecord> fields;   // size F
  Eigen::MatrixXd Qt, Rt;           // rotated Mh / Tsq coefficient blocks
};

struct DegreeDecomposition {
  int degree = 0;
  int sign = 1;  // +1 for even degree, -1 for odd
  std::vector<int> block;
  std::vector<ModeComponent> comps;
  std::vector<std::string> warnings;  // unresolved borderline extensions etc.
};

DegreeDecomposition decompose_degree(const ModelAssembly& mdl, int degree);

double weight_eval(const ModeRecord& rec, double sigma);

// ---------------------------------------------------------------------------
// Spectral computation.
// ---------------------------------------------------------------------------
struct ComponentSpectrum {
  ModeComponent comp;
  std::vector<double> evals_sigma;  // ascending, sigma units
  Eigen::MatrixXd vectors;          // (F N) x nev, point-major, v-coordinates
  std::vector<double> residuals;
  int kernel_count = 0;  // eigenvalues below the split threshold
};

struct SpectralReport {
  int degree = 0;
  double t = 1.0;
  std::vector<double> eigenvalues;  // lowest J across components, lambda units
  std::vector<double> residuals;
  std::vector<int> comp_index;   // component of origin per listed eigenvalue
  std::vector<int> comp_member;  // index within that component
  int kernel_dim = 0;
  double tau_split = 0.0;
  double gap_lower = 0.0;  // smallest eigenvalue >= tau_split
  std::vector<ComponentSpectrum> components;
  std::vector<std::string> warnings;
};

SpectralReport compute_spectrum(const ModelAssembly& mdl, int degree, const RadialGrid& grid,
                                int J);

// physical-coordinate profiles u_e(node_j) of eigenvector `which`
Eigen::MatrixXd component_profiles(const ComponentSpectrum& cs, const RadialGrid& grid, int which);

// ---------------------------------------------------------------------------
// Diagnostics.
// ---------------------------------------------------------------------------
struct RescalingReport {
  double t = 1.0;
  int degree = 0, J = 0;
  bool rescaled_grid = true;
  double max_defect = 0.0;
  std::vector<double> lam_t, lam_scaled;  // lambda_j(t) and t^2 lambda_j(1)
};

// compares spectra at parameter t against t^2 times the spectrum at 1, on
// grids r -> r/t (rescaled_grid) or on one common r-grid
RescalingReport verify_rescaling(const LinkModel& link, const MorsePotential& pot, int degree,
                                 double t, int J, int N, bool rescaled_grid);

struct GapFit {
  double c = 0.0, p = 0.0;  // lambda ~ c t^p
};

GapFit fit_power_law(const std::vector<std::pair<double, double>>& t_lambda);

// ---------------------------------------------------------------------------
// Exact references for f = +-r (constant h) and for the curve model.
// ---------------------------------------------------------------------------
struct KernelElement {
  int phi_slot = 0;   // tuple slot carrying the profile
  int link_mode = 0;  // harmonic mode index within that link degree
  double power = 0.0;  // u ~ r^power e^{-t r}
};

struct KernelOracle {
  int degree = 0;
  int dim = 0;
  std::vector<KernelElement> elements;
};

KernelOracle explicit_kernel_pm(const LinkModel& link, int sign, int degree);

struct BesselOracle {
  int m = 1;
  double t = 1.0;
  std::vector<double> orders;  // k/m for 0 < k < m
  Eigen::MatrixXd profiles;    // N x (m-1): sqrt(r) K_order(t r) at r = node/t
  double max_ode_residual = 0.0;
};

BesselOracle bessel_kernel_oracle(int m, double t, const RadialGrid& grid);

}  // namespace conespec
