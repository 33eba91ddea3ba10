#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "conespec/eigen_solve.hpp"
#include "conespec/ih.hpp"
#include "conespec/model_operator.hpp"

namespace conespec {

enum class GlobalPreset { spindle_min, spindle_max, suspension };

GlobalPreset preset_from_name(const std::string& name);
std::string preset_name(GlobalPreset p);

struct SmoothCritical {
  double s = 0.0;
  int index = 0;
};

struct ConicCritical {
  double s = 0.0;
  Halflink halflink;
};

// Surface of revolution ds^2 + rho(s)^2 dtheta^2 on (0, R), sampled on a
// uniform staggered grid (N+1 vertices, N edge midpoints), with a radial
// Morse function f. Poles sit at s = 0 and s = R; a conic pole has
// rho ~ m*s there, a smooth one rho ~ (R - s).
struct GlobalSurface {
  double R = 2.0;
  int m = 1;
  int N = 1024;
  int K_fourier = 8;
  bool conic0 = true, conic1 = false;

  std::vector<double> s_vert, s_edge;    // N+1 / N sample points
  std::vector<double> rho_vert, rho_edge;
  std::vector<double> f_vert, f_edge;
  std::vector<double> fp_edge;           // f' at edge midpoints

  double admissibility_a = 0.0;          // min |f'| near the poles

  std::vector<SmoothCritical> smooth_points;
  std::vector<ConicCritical> conic_points;
  std::array<int, 3> expected_counts = {0, 0, 0};  // c_i(f)
  std::array<int, 3> betti = {1, 0, 1};            // b_i^(2)
};

// Sampling helper: fills the grid fields from closures. No critical-point
// declarations and no admissibility validation (test fixtures use this).
GlobalSurface sample_surface(double R, int N, int K_fourier, int m,
                             const std::function<double(double)>& rho,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& fprime);

GlobalSurface build_preset(GlobalPreset preset, int m, int N = 1024, int K_fourier = 8);

// One Fourier mode k >= 0 of the Witten-deformed de Rham complex,
// in the real representative (u cos, [alpha cos ds, beta sin dtheta], w sin).
// 1-form dofs interleave as alpha_0, beta_1, alpha_1, ..., beta_{N-1}, alpha_{N-1}.
// With exponential fitting d_t annihilates the sampled e^{-tf} exactly, so the
// degree-0/2 ground states are discrete kernel vectors at every t.
struct ModeComplex {
  int k = 0;
  double t = 0.0;
  bool fitted = true;
  int n0 = 0, n1 = 0, n2 = 0;
  Eigen::SparseMatrix<double> d0, d1;          // n1 x n0, n2 x n1
  Eigen::SparseMatrix<double> delta0, delta1;  // adjoints under the masses
  Eigen::VectorXd m0, m1, m2;                  // diagonal mass matrices
  double adjoint_defect = 0.0;  // probe of <d u, v> - <u, delta v>
  double d2_norm = 0.0;         // ||d1 d0|| on probes, relative
};

ModeComplex assemble_mode_complex(const GlobalSurface& surf, int k, double t,
                                  bool exponential_fitting = true);

// Generalized pencil A x = lambda M x of Delta_t restricted to `degree`.
struct LaplacePencil {
  BandedSym A;
  Eigen::VectorXd mass;
};
LaplacePencil laplacian_pencil(const ModeComplex& mc, int degree);

// Symmetrized M^{-1/2} A M^{-1/2}, same band.
BandedSym symmetrized_laplacian(const ModeComplex& mc, int degree);

struct ModeCounts {
  int k = 0;
  std::array<int, 3> counts = {0, 0, 0};
  double lambda_next = 0.0;     // min over degrees of first eigenvalue > threshold
  double max_small = 0.0;       // largest |lambda| among the counted ones
};

struct GlobalCounts {
  double t = 0.0;
  double threshold = 1.0;
  std::array<int, 3> counts = {0, 0, 0};  // summed over modes, |k| >= 1 doubled
  double lambda_next = 0.0;
  double max_small = 0.0;
  std::array<double, 3> lambda_next_by_degree = {0, 0, 0};
  std::array<double, 3> max_small_by_degree = {0, 0, 0};
  int euler = 0;                           // alternating sum of counts
  bool matches_expected = false;
  std::vector<ModeCounts> per_mode;
};

// Counts eigenvalues of Delta_t in [0, threshold] per degree over all Fourier
// modes |k| <= K_fourier * m. Probes modes up to (K_fourier + 4) * m and
// throws TruncationInsufficient if they contribute.
GlobalCounts count_small_eigenvalues(const GlobalSurface& surf, double t,
                                     double threshold = 1.0, double t0 = 10.0);

struct GapScanPoint {
  double t = 0.0;
  double lambda_next = 0.0;
  double max_small = 0.0;
  std::array<int, 3> counts = {0, 0, 0};
  std::array<double, 3> lambda_next_by_degree = {0, 0, 0};
  std::array<double, 3> max_small_by_degree = {0, 0, 0};
};

struct GapScan {
  std::vector<GapScanPoint> points;
  GapFit fit;  // log-log fit of lambda_next vs t
};

// t list must be geometric with >= 4 points, all >= t0.
GapScan gap_growth_scan(const GlobalSurface& surf, const std::vector<double>& ts,
                        double t0 = 10.0);

// Max relative deviation of the lowest J eigenvalues of Delta_t on 2-forms
// from the dual-layout 0-form operator with f -> -f (discrete star conjugation).
double hodge_duality_defect(const GlobalSurface& surf, int k, double t, int J);

// Residual of the unfitted matrix identity
// delta_t d_t = delta d + t diag(delta d f) + t^2 Avg(|f'|^2)
// on smooth probes supported away from the poles (k = 0).
double zero_form_identity_defect(const GlobalSurface& surf, double t);

}  // namespace conespec
