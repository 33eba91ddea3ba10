#include "conespec/global_surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "conespec/errors.hpp"
#include "conespec/morse_check.hpp"

namespace conespec {

namespace {

// Quintic Hermite blend on [a, b]: value/slope/curvature at both ends.
double quintic_blend(double s, double a, double b, double v0, double d0, double c0,
                     double v1, double d1, double c1) {
  const double L = b - a, x = (s - a) / L;
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double H0 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
  const double H1 = x - 6 * x3 + 8 * x4 - 3 * x5;
  const double H2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
  const double H3 = 0.5 * x3 - x4 + 0.5 * x5;
  const double H4 = -4 * x3 + 7 * x4 - 3 * x5;
  const double H5 = 10 * x3 - 15 * x4 + 6 * x5;
  return v0 * H0 + d0 * L * H1 + c0 * L * L * H2 + c1 * L * L * H3 + d1 * L * H4 + v1 * H5;
}

struct PresetFns {
  std::function<double(double)> rho, f, fp;
};

// Shared spindle Morse function: f = s near the cone, quadratic cap at the
// smooth pole, cubic-free blend with f' = 1 - (s - 1/2)^2 / 2 in between.
double spindle_f(double s) {
  if (s <= 0.5) return s;
  if (s <= 1.5) return s - std::pow(s - 0.5, 3) / 6.0;
  return 35.0 / 24.0 - 0.5 * (2.0 - s) * (2.0 - s);
}
double spindle_fp(double s) {
  if (s <= 0.5) return 1.0;
  if (s <= 1.5) return 1.0 - 0.5 * (s - 0.5) * (s - 0.5);
  return 2.0 - s;
}

PresetFns preset_functions(GlobalPreset preset, int m) {
  PresetFns fns;
  const double md = m;
  switch (preset) {
    case GlobalPreset::spindle_min:
    case GlobalPreset::spindle_max: {
      fns.rho = [md](double s) {
        if (s <= 0.5) return md * s;
        if (s >= 1.5) return 2.0 - s;
        return quintic_blend(s, 0.5, 1.5, 0.5 * md, md, 0.0, 0.5, -1.0, 0.0);
      };
      const double sign = preset == GlobalPreset::spindle_min ? 1.0 : -1.0;
      fns.f = [sign](double s) { return sign * spindle_f(s); };
      fns.fp = [sign](double s) { return sign * spindle_fp(s); };
      break;
    }
    case GlobalPreset::suspension: {
      fns.rho = [md](double s) {
        if (s <= 0.5) return md * s;
        if (s >= 1.5) return md * (2.0 - s);
        return quintic_blend(s, 0.5, 1.5, 0.5 * md, md, 0.0, 0.5 * md, -md, 0.0);
      };
      fns.f = [](double s) { return s; };
      fns.fp = [](double) { return 1.0; };
      break;
    }
  }
  return fns;
}

}  // namespace

GlobalPreset preset_from_name(const std::string& name) {
  if (name == "spindle_min") return GlobalPreset::spindle_min;
  if (name == "spindle_max") return GlobalPreset::spindle_max;
  if (name == "suspension") return GlobalPreset::suspension;
  throw InvalidParameter("unknown preset '" + name +
                         "' (valid: spindle_min, spindle_max, suspension)");
}

std::string preset_name(GlobalPreset p) {
  switch (p) {
    case GlobalPreset::spindle_min: return "spindle_min";
    case GlobalPreset::spindle_max: return "spindle_max";
    case GlobalPreset::suspension: return "suspension";
  }
  return "?";
}

GlobalSurface sample_surface(double R, int N, int K_fourier, int m,
                             const std::function<double(double)>& rho,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& fprime) {
  if (R <= 0) throw InvalidParameter("sample_surface: R must be positive");
  if (N < 16) throw InvalidParameter("sample_surface: N must be >= 16");
  if (K_fourier < 0) throw InvalidParameter("sample_surface: K_fourier must be >= 0");
  if (m < 1) throw InvalidParameter("sample_surface: m must be >= 1");
  GlobalSurface s;
  s.R = R;
  s.N = N;
  s.K_fourier = K_fourier;
  s.m = m;
  s.s_vert.resize(N + 1);
  s.s_edge.resize(N);
  s.rho_vert.resize(N + 1);
  s.rho_edge.resize(N);
  s.f_vert.resize(N + 1);
  s.f_edge.resize(N);
  s.fp_edge.resize(N);
  for (int j = 0; j <= N; ++j) {
    s.s_vert[j] = R * j / N;
    s.rho_vert[j] = rho(s.s_vert[j]);
    s.f_vert[j] = f(s.s_vert[j]);
  }
  for (int e = 0; e < N; ++e) {
    s.s_edge[e] = R * (2 * e + 1) / (2.0 * N);
    s.rho_edge[e] = rho(s.s_edge[e]);
    s.f_edge[e] = f(s.s_edge[e]);
    s.fp_edge[e] = fprime(s.s_edge[e]);
  }
  return s;
}

GlobalSurface build_preset(GlobalPreset preset, int m, int N, int K_fourier) {
  if (m < 1) throw InvalidParameter("build_preset: m must be >= 1");
  PresetFns fns = preset_functions(preset, m);
  GlobalSurface s = sample_surface(2.0, N, K_fourier, m, fns.rho, fns.f, fns.fp);
  s.conic0 = true;
  s.conic1 = preset == GlobalPreset::suspension;

  std::vector<std::vector<int>> contribs;
  std::vector<int> smooth(3, 0);
  switch (preset) {
    case GlobalPreset::spindle_min:
      s.conic_points = {{0.0, Halflink::empty()}};
      s.smooth_points = {{2.0, 2}};
      break;
    case GlobalPreset::spindle_max:
      s.conic_points = {{0.0, Halflink::full_link()}};
      s.smooth_points = {{2.0, 0}};
      break;
    case GlobalPreset::suspension:
      s.conic_points = {{0.0, Halflink::empty()}, {2.0, Halflink::full_link()}};
      break;
  }
  for (const auto& sp : s.smooth_points) smooth[sp.index] += 1;
  for (const auto& cp : s.conic_points)
    contribs.push_back(morse_contribution({1, {1, 1}, cp.halflink}));
  MorseCounts mc = total_counts(smooth, contribs, {1, 0, 1});
  for (int i = 0; i < 3; ++i) s.expected_counts[i] = mc.total[i];
  s.betti = {1, 0, 1};

  // structural checks on the sampled data
  for (int j = 1; j < N; ++j)
    if (!(s.rho_vert[j] > 0))
      throw ModelInconsistency("build_preset: profile not positive in the interior");
  for (int e = 0; e < N; ++e)
    if (!(s.rho_edge[e] > 0))
      throw ModelInconsistency("build_preset: profile not positive in the interior");
  for (const auto& cp : s.conic_points) {
    const double f0 = fns.f(cp.s);
    for (int j = 0; j <= N; ++j) {
      const double dist = std::abs(s.s_vert[j] - cp.s);
      if (dist > 0.05 * s.R) continue;
      // f(p) + dist or f(p) - dist, depending on whether the point is a min or max
      if (std::min(std::abs(s.f_vert[j] - (f0 + dist)), std::abs(s.f_vert[j] - (f0 - dist))) >
          1e-12)
        throw ModelInconsistency("build_preset: f is not exactly linear near a conic point");
    }
  }
  double a = std::numeric_limits<double>::infinity();
  for (int e = 0; e < N; ++e) {
    bool near_smooth = false;
    for (const auto& sp : s.smooth_points)
      if (std::abs(s.s_edge[e] - sp.s) < 0.15 * s.R) near_smooth = true;
    if (!near_smooth) a = std::min(a, std::abs(s.fp_edge[e]));
    bool near_pole = s.s_edge[e] < 0.25 * s.R || s.s_edge[e] > 0.75 * s.R;
    if (near_pole && !near_smooth && std::abs(s.fp_edge[e]) < 0.3)
      throw ModelInconsistency("build_preset: |f'| degenerates near a pole");
  }
  if (!(a > 0.05))
    throw ModelInconsistency("build_preset: f' vanishes away from declared critical points");
  s.admissibility_a = a;
  return s;
}

namespace {

struct DofMaps {
  int N = 0, k = 0;
  int n0 = 0, n1 = 0, n2 = 0;
  int v(int j) const { return k == 0 ? j : j - 1; }  // valid dof assumed
  bool has_v(int j) const { return k == 0 || (j >= 1 && j <= N - 1); }
  int a(int e) const { return 2 * e; }
  int b(int j) const { return 2 * j - 1; }  // j = 1 .. N-1
};

DofMaps make_maps(const GlobalSurface& s, int k) {
  DofMaps m;
  m.N = s.N;
  m.k = k;
  m.n0 = k == 0 ? s.N + 1 : s.N - 1;
  m.n1 = 2 * s.N - 1;
  m.n2 = s.N;
  return m;
}

BandedSym band_from_sparse(const Eigen::SparseMatrix<double>& A, int kd) {
  BandedSym B = BandedSym::zero(static_cast<int>(A.rows()), kd);
  double scale = 0.0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  for (int c = 0; c < A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      if (i < j) continue;  // symmetric, keep lower
      if (i - j > kd) {
        if (std::abs(it.value()) > 1e-12 * scale)
          throw AssemblyError("laplacian_pencil: entry outside the expected band");
        continue;
      }
      B.at(i, j) = it.value();
    }
  return B;
}

}  // namespace

ModeComplex assemble_mode_complex(const GlobalSurface& s, int k, double t,
                                  bool exponential_fitting) {
  if (static_cast<int>(s.s_vert.size()) != s.N + 1 || static_cast<int>(s.s_edge.size()) != s.N)
    throw InvalidParameter("assemble_mode_complex: surface is not sampled");
  if (k < 0) throw InvalidParameter("assemble_mode_complex: k must be >= 0");
  if (k > (s.K_fourier + 4) * s.m)
    throw InvalidParameter("assemble_mode_complex: k exceeds the declared Fourier truncation");
  if (t < 0) throw InvalidParameter("assemble_mode_complex: t must be >= 0");

  const DofMaps dm = make_maps(s, k);
  ModeComplex mc;
  mc.k = k;
  mc.t = t;
  mc.fitted = exponential_fitting;
  mc.n0 = dm.n0;
  mc.n1 = dm.n1;
  mc.n2 = dm.n2;

  const int N = s.N;
  std::vector<Eigen::Triplet<double>> t0, t1;
  for (int e = 0; e < N; ++e) {
    const double h = s.s_vert[e + 1] - s.s_vert[e];
    double cp, cm;  // coefficients of u_{e+1} and u_e in the fitted derivative
    if (exponential_fitting) {
      cp = std::exp(t * (s.f_vert[e + 1] - s.f_edge[e])) / h;
      cm = std::exp(t * (s.f_vert[e] - s.f_edge[e])) / h;
    } else {
      cp = 1.0 / h + 0.5 * t * s.fp_edge[e];
      cm = 1.0 / h - 0.5 * t * s.fp_edge[e];
    }
    if (dm.has_v(e + 1)) t0.emplace_back(dm.a(e), dm.v(e + 1), cp);
    if (dm.has_v(e)) t0.emplace_back(dm.a(e), dm.v(e), -cm);
    if (e + 1 <= N - 1) t1.emplace_back(e, dm.b(e + 1), cp);
    if (e >= 1) t1.emplace_back(e, dm.b(e), -cm);
    if (k > 0) t1.emplace_back(e, dm.a(e), static_cast<double>(k));
  }
  if (k > 0)
    for (int j = 1; j <= N - 1; ++j)
      t0.emplace_back(dm.b(j), dm.v(j), -static_cast<double>(k));

  mc.d0.resize(dm.n1, dm.n0);
  mc.d0.setFromTriplets(t0.begin(), t0.end());
  mc.d1.resize(dm.n2, dm.n1);
  mc.d1.setFromTriplets(t1.begin(), t1.end());

  mc.m0 = Eigen::VectorXd::Zero(dm.n0);
  mc.m1 = Eigen::VectorXd::Zero(dm.n1);
  mc.m2 = Eigen::VectorXd::Zero(dm.n2);
  for (int e = 0; e < N; ++e) {
    const double h = s.s_vert[e + 1] - s.s_vert[e];
    for (int j : {e, e + 1})
      if (dm.has_v(j)) mc.m0[dm.v(j)] += h * (s.rho_vert[j] + s.rho_edge[e]) / 4.0;
    mc.m1[dm.a(e)] = s.rho_edge[e] * h;
    for (int j : {e, e + 1})
      if (j >= 1 && j <= N - 1)
        mc.m1[dm.b(j)] += h * (1.0 / s.rho_vert[j] + 1.0 / s.rho_edge[e]) / 4.0;
    mc.m2[e] = h / s.rho_edge[e];
  }

  // adjoints under the diagonal masses
  Eigen::SparseMatrix<double> d0t = mc.d0.transpose(), d1t = mc.d1.transpose();
  mc.delta0 = d0t;
  for (int c = 0; c < mc.delta0.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mc.delta0, c); it; ++it)
      it.valueRef() *= mc.m1[it.col()] / mc.m0[it.row()];
  mc.delta1 = d1t;
  for (int c = 0; c < mc.delta1.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mc.delta1, c); it; ++it)
      it.valueRef() *= mc.m2[it.col()] / mc.m1[it.row()];

  // internal consistency: adjointness and d_t o d_t = 0 on probes
  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss;
  for (int probe = 0; probe < 3; ++probe) {
    Eigen::VectorXd u(dm.n0), v(dm.n1), w(dm.n2);
    for (int i = 0; i < dm.n0; ++i) u[i] = gauss(rng);
    for (int i = 0; i < dm.n1; ++i) v[i] = gauss(rng);
    for (int i = 0; i < dm.n2; ++i) w[i] = gauss(rng);
    const double a01 = (mc.d0 * u).dot(mc.m1.cwiseProduct(v));
    const double b01 = u.dot(mc.m0.cwiseProduct(mc.delta0 * v));
    const double a12 = (mc.d1 * v).dot(mc.m2.cwiseProduct(w));
    const double b12 = v.dot(mc.m1.cwiseProduct(mc.delta1 * w));
    mc.adjoint_defect = std::max(
        mc.adjoint_defect,
        std::max(std::abs(a01 - b01) / std::max(std::abs(a01) + std::abs(b01), 1e-30),
                 std::abs(a12 - b12) / std::max(std::abs(a12) + std::abs(b12), 1e-30)));
    const Eigen::VectorXd du = mc.d0 * u;
    const Eigen::VectorXd r = mc.d1 * du;
    Eigen::VectorXd denom = Eigen::VectorXd::Zero(dm.n2);
    for (int c = 0; c < mc.d1.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(mc.d1, c); it; ++it)
        denom[it.row()] += std::abs(it.value() * du[it.col()]);
    mc.d2_norm = std::max(mc.d2_norm, r.norm() / std::max(denom.norm(), 1e-30));
  }
  if (mc.adjoint_defect > 1e-10)
    throw ModelInconsistency("assemble_mode_complex: adjointness defect above 1e-10");
  if (mc.d2_norm > 1e-10)
    throw ModelInconsistency("assemble_mode_complex: d_t o d_t does not vanish");
  return mc;
}

LaplacePencil laplacian_pencil(const ModeComplex& mc, int degree) {
  LaplacePencil p;
  Eigen::SparseMatrix<double> A;
  if (degree == 0) {
    Eigen::SparseMatrix<double> d0t = mc.d0.transpose();
    Eigen::SparseMatrix<double> md0 = mc.m1.asDiagonal() * mc.d0;
    A = d0t * md0;
    p.mass = mc.m0;
    p.A = band_from_sparse(A, 1);
  } else if (degree == 1) {
    Eigen::SparseMatrix<double> md0 = mc.m1.asDiagonal() * mc.d0;
    Eigen::SparseMatrix<double> md0t = md0.transpose();
    Eigen::SparseMatrix<double> lower = md0 * (mc.m0.cwiseInverse().asDiagonal() * md0t);
    Eigen::SparseMatrix<double> d1t = mc.d1.transpose();
    Eigen::SparseMatrix<double> upper = d1t * (mc.m2.asDiagonal() * mc.d1);
    A = lower + upper;
    p.mass = mc.m1;
    p.A = band_from_sparse(A, 2);
  } else if (degree == 2) {
    Eigen::SparseMatrix<double> md1 = mc.m2.asDiagonal() * mc.d1;
    Eigen::SparseMatrix<double> md1t = md1.transpose();
    A = md1 * (mc.m1.cwiseInverse().asDiagonal() * md1t);
    p.mass = mc.m2;
    p.A = band_from_sparse(A, 1);
  } else {
    throw InvalidParameter("laplacian_pencil: degree must be 0, 1, or 2");
  }
  return p;
}

BandedSym symmetrized_laplacian(const ModeComplex& mc, int degree) {
  LaplacePencil p = laplacian_pencil(mc, degree);
  BandedSym out = BandedSym::zero(p.A.n, p.A.kd);
  for (int j = 0; j < p.A.n; ++j)
    for (int i = j; i <= std::min(p.A.n - 1, j + p.A.kd); ++i)
      out.at(i, j) = p.A.at(i, j) / std::sqrt(p.mass[i] * p.mass[j]);
  return out;
}

namespace {

struct DegreeSolve {
  int count = 0;
  double next = std::numeric_limits<double>::infinity();
  double max_small = 0.0;
};

DegreeSolve solve_degree(const ModeComplex& mc, int degree, double threshold) {
  BandedSym Ah = symmetrized_laplacian(mc, degree);
  DegreeSolve out;
  out.count = eig_banded_count_below(Ah, threshold);
  if (out.count < Ah.n) out.next = eig_banded_kth(Ah, out.count + 1);
  for (int i = 1; i <= out.count; ++i)
    out.max_small = std::max(out.max_small, std::abs(eig_banded_kth(Ah, i)));
  return out;
}

GlobalCounts counts_core(const GlobalSurface& s, double t, double threshold) {
  GlobalCounts g;
  g.t = t;
  g.threshold = threshold;
  g.lambda_next = std::numeric_limits<double>::infinity();
  g.lambda_next_by_degree.fill(std::numeric_limits<double>::infinity());
  for (int k = 0; k <= s.K_fourier * s.m; ++k) {
    ModeComplex mc = assemble_mode_complex(s, k, t);
    ModeCounts row;
    row.k = k;
    row.lambda_next = std::numeric_limits<double>::infinity();
    for (int deg = 0; deg < 3; ++deg) {
      DegreeSolve ds = solve_degree(mc, deg, threshold);
      row.counts[deg] = ds.count;
      row.lambda_next = std::min(row.lambda_next, ds.next);
      row.max_small = std::max(row.max_small, ds.max_small);
      g.lambda_next_by_degree[deg] = std::min(g.lambda_next_by_degree[deg], ds.next);
      g.max_small_by_degree[deg] = std::max(g.max_small_by_degree[deg], ds.max_small);
    }
    const int weight = k == 0 ? 1 : 2;
    for (int deg = 0; deg < 3; ++deg) g.counts[deg] += weight * row.counts[deg];
    g.lambda_next = std::min(g.lambda_next, row.lambda_next);
    g.max_small = std::max(g.max_small, row.max_small);
    g.per_mode.push_back(row);
  }
  g.euler = g.counts[0] - g.counts[1] + g.counts[2];
  g.matches_expected = g.counts == s.expected_counts;
  return g;
}

}  // namespace

GlobalCounts count_small_eigenvalues(const GlobalSurface& s, double t, double threshold,
                                     double t0) {
  if (!(t0 > 0)) throw InvalidParameter("count_small_eigenvalues: t0 must be positive");
  if (t < t0)
    throw InvalidParameter("count_small_eigenvalues: t below the declared t0 = " +
                           std::to_string(t0));
  if (!(threshold > 0)) throw InvalidParameter("count_small_eigenvalues: threshold must be positive");
  GlobalCounts g = counts_core(s, t, threshold);
  for (int k = s.K_fourier * s.m + 1; k <= (s.K_fourier + 4) * s.m; ++k) {
    ModeComplex mc = assemble_mode_complex(s, k, t);
    for (int deg = 0; deg < 3; ++deg) {
      BandedSym Ah = symmetrized_laplacian(mc, deg);
      if (eig_banded_count_below(Ah, threshold) != 0)
        throw TruncationInsufficient(
            "count_small_eigenvalues: counts change when K_fourier grows to K+4 (mode k=" +
            std::to_string(k) + " contributes); raise K_fourier");
    }
  }
  return g;
}

GapScan gap_growth_scan(const GlobalSurface& s, const std::vector<double>& ts, double t0) {
  if (ts.size() < 4) throw InvalidParameter("gap_growth_scan: need at least 4 t values");
  for (double t : ts)
    if (t < t0)
      throw InvalidParameter("gap_growth_scan: every t must be >= t0 = " + std::to_string(t0));
  const double ratio = ts[1] / ts[0];
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (std::abs(ts[i + 1] / ts[i] - ratio) > 1e-9 * ratio)
      throw InvalidParameter("gap_growth_scan: t list must be geometric");
  GapScan scan;
  std::vector<std::pair<double, double>> samples;
  for (double t : ts) {
    GlobalCounts g = counts_core(s, t, 1.0);
    scan.points.push_back({t, g.lambda_next, g.max_small, g.counts, g.lambda_next_by_degree,
                           g.max_small_by_degree});
    samples.emplace_back(t, g.lambda_next);
  }
  scan.fit = fit_power_law(samples);
  return scan;
}

double hodge_duality_defect(const GlobalSurface& s, int k, double t, int J) {
  if (J < 1) throw InvalidParameter("hodge_duality_defect: J must be >= 1");
  ModeComplex mc = assemble_mode_complex(s, k, t);
  BandedSym A2 = symmetrized_laplacian(mc, 2);

  // dual-layout 0-form operator with f -> -f: vertices at the edge midpoints
  const int N = s.N;
  const DofMaps dm = make_maps(s, k);
  BandedSym Ad = BandedSym::zero(N, 1);
  Eigen::VectorXd md(N);
  for (int e = 0; e < N; ++e) {
    const double h = s.s_vert[e + 1] - s.s_vert[e];
    md[e] = h * h / mc.m2[e];
    Ad.at(e, e) = k * k * h * h / mc.m1[dm.a(e)];
  }
  for (int j = 1; j <= N - 1; ++j) {
    const double ht = s.s_edge[j] - s.s_edge[j - 1];
    const double mt1 = ht * ht / mc.m1[dm.b(j)];
    const double ep = std::exp(t * (s.f_vert[j] - s.f_edge[j])) / ht;      // right neighbor
    const double em = std::exp(t * (s.f_vert[j] - s.f_edge[j - 1])) / ht;  // left neighbor
    Ad.at(j, j) += mt1 * ep * ep;
    Ad.at(j - 1, j - 1) += mt1 * em * em;
    Ad.at(j, j - 1) += -mt1 * ep * em;
  }
  BandedSym Adh = BandedSym::zero(N, 1);
  for (int j = 0; j < N; ++j) {
    Adh.at(j, j) = Ad.at(j, j) / md[j];
    if (j + 1 < N) Adh.at(j + 1, j) = Ad.at(j + 1, j) / std::sqrt(md[j] * md[j + 1]);
  }

  double defect = 0.0;
  for (int i = 1; i <= J; ++i) {
    const double a = eig_banded_kth(A2, i), b = eig_banded_kth(Adh, i);
    defect = std::max(defect, std::abs(a - b) / std::max(std::abs(b), 1.0));
  }
  return defect;
}

double zero_form_identity_defect(const GlobalSurface& s, double t) {
  ModeComplex mt = assemble_mode_complex(s, 0, t, false);
  ModeComplex m0 = assemble_mode_complex(s, 0, 0.0, false);
  const int N = s.N, n0 = mt.n0;

  // W = df-wedge part of the unfitted d_t on the ds component
  std::vector<Eigen::Triplet<double>> tw;
  for (int e = 0; e < N; ++e) {
    tw.emplace_back(2 * e, e, 0.5 * s.fp_edge[e]);
    tw.emplace_back(2 * e, e + 1, 0.5 * s.fp_edge[e]);
  }
  Eigen::SparseMatrix<double> W(mt.n1, n0);
  W.setFromTriplets(tw.begin(), tw.end());

  // coefficient term: discrete codifferential applied to the same edge samples of
  // df that W uses; with matching samples the identity is exact, not O(h^2)
  Eigen::VectorXd g1 = Eigen::VectorXd::Zero(mt.n1);
  for (int e = 0; e < N; ++e) g1[2 * e] = s.fp_edge[e];
  const Eigen::VectorXd lapf =
      mt.m0.cwiseInverse().cwiseProduct(m0.d0.transpose() * (mt.m1.cwiseProduct(g1)));

  std::mt19937 rng(777);
  std::normal_distribution<double> gauss;
  double defect = 0.0;
  for (int probe = 0; probe < 4; ++probe) {
    Eigen::VectorXd u(n0);
    for (int j = 0; j <= N; ++j) {
      const double sj = s.s_vert[j];
      u[j] = (sj > 0.15 * s.R && sj < 0.85 * s.R) ? gauss(rng) : 0.0;
    }
    const Eigen::VectorXd lhs =
        mt.m0.cwiseInverse().cwiseProduct(mt.d0.transpose() * (mt.m1.cwiseProduct(mt.d0 * u)));
    const Eigen::VectorXd base =
        mt.m0.cwiseInverse().cwiseProduct(m0.d0.transpose() * (mt.m1.cwiseProduct(m0.d0 * u)));
    const Eigen::VectorXd avg =
        mt.m0.cwiseInverse().cwiseProduct(W.transpose() * (mt.m1.cwiseProduct(W * u)));
    const Eigen::VectorXd rhs = base + t * lapf.cwiseProduct(u) + t * t * avg;
    const double scale = base.norm() + t * lapf.cwiseProduct(u).norm() + t * t * avg.norm() + 1.0;
    defect = std::max(defect, (lhs - rhs).norm() / scale);
  }
  return defect;
}

}  // namespace conespec
