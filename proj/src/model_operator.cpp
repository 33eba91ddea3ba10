#include "conespec/model_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

double coeff_c(int i, int n) {
  const double s = (i % 2 == 0) ? 1.0 : -1.0;
  return s * (i - 0.5 * n);
}

// scatter a degree-slot block into the tuple matrix
void put_block(Eigen::MatrixXd& M, const LinkModel& L, int row_deg, int col_deg,
               const Eigen::MatrixXd& B) {
  M.block(L.offset(row_deg), L.offset(col_deg), L.dim(row_deg), L.dim(col_deg)) += B;
}

}  // namespace

Eigen::MatrixXd build_S0(const LinkModel& link) {
  const int D = link.total_dim();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i <= link.n; ++i) {
    put_block(S, link, i, i,
              coeff_c(i, link.n) * Eigen::MatrixXd::Identity(link.dim(i), link.dim(i)));
    if (i < link.n) {
      put_block(S, link, i + 1, i, link.d_link[i]);
      put_block(S, link, i, i + 1, link.d_link[i].transpose());
    }
  }
  return S;
}

Eigen::MatrixXd build_T(const LinkModel& link, const MorsePotential& pot) {
  const int D = link.total_dim();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i <= link.n; ++i) {
    const double s = (i % 2 == 0) ? 1.0 : -1.0;
    put_block(T, link, i, i, s * pot.mult_h[i]);
    if (i < link.n) {
      put_block(T, link, i + 1, i, pot.wedge_dh[i]);
      put_block(T, link, i, i + 1, pot.contract_gradh[i]);
    }
  }
  return T;
}

Eigen::MatrixXd build_Mh(const LinkModel& link, const MorsePotential& pot) {
  const int D = link.total_dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(D, D);
  for (int i = 0; i <= link.n; ++i) {
    Eigen::MatrixXd B = 2.0 * ((i % 2 == 0) ? 1.0 : -1.0) * coeff_c(i, link.n) * pot.mult_h[i];
    if (i > 0) {
      B += pot.wedge_dh[i - 1] * link.d_link[i - 1].transpose();
      B += link.d_link[i - 1] * pot.contract_gradh[i - 1];
    }
    if (i < link.n) {
      B += link.d_link[i].transpose() * pot.wedge_dh[i];
      B += pot.contract_gradh[i] * link.d_link[i];
    }
    put_block(M, link, i, i, B);
  }
  return M;
}

Eigen::MatrixXd build_Tsq(const LinkModel& link, const MorsePotential& pot) {
  const int D = link.total_dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(D, D);
  if (pot.constant) {
    const double g = pot.constant_value * pot.constant_value;
    for (int i = 0; i <= link.n; ++i)
      put_block(M, link, i, i, g * Eigen::MatrixXd::Identity(link.dim(i), link.dim(i)));
    return M;
  }
  if (!link.circle || !pot.h)
    throw UnsupportedOracle("build_Tsq: non-constant potentials need a circle link");
  TrigPoly dh = pot.h->derivative();
  TrigPoly g = (*pot.h) * (*pot.h) + dh * dh;
  for (int i = 0; i <= link.n; ++i) put_block(M, link, i, i, circle_mult_matrix(link, g, i));
  return M;
}

ModelAssembly make_assembly(const LinkModel& link, const MorsePotential& pot, double t) {
  if (!(t > 0.0)) throw InvalidParameter("make_assembly: deformation parameter t must be positive");
  if (static_cast<int>(pot.mult_h.size()) != link.n + 1)
    throw ModelInconsistency("make_assembly: potential and link have different degree ranges");
  ModelAssembly a;
  a.link = link;
  a.pot = pot;
  a.t = t;
  a.S0 = build_S0(link);
  a.T = build_T(link, pot);
  a.Mh = build_Mh(link, pot);
  a.Tsq = build_Tsq(link, pot);
  a.degree_blocks.resize(link.n + 2);
  for (int k = 0; k <= link.n + 1; ++k) {
    std::vector<int>& blk = a.degree_blocks[k];
    if (k >= 1)
      for (int j = 0; j < link.dim(k - 1); ++j) blk.push_back(link.offset(k - 1) + j);
    if (k <= link.n)
      for (int j = 0; j < link.dim(k); ++j) blk.push_back(link.offset(k) + j);
  }
  if (link.circle && pot.h && !pot.constant) {
    // h = cos(phi) on the base circle, i.e. a pure cosine at frequency m
    bool std_curve = true;
    const TrigPoly& h = *pot.h;
    for (int k = 0; k <= h.max_freq(); ++k) {
      const double target = (k == link.m) ? 1.0 : 0.0;
      if (std::abs(h.a(k) - target) > 1e-15 || std::abs(h.b(k)) > 1e-15) std_curve = false;
    }
    if (h.max_freq() < link.m) std_curve = false;
    a.standard_curve = std_curve;
  }
  return a;
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

RadialGrid make_radial_grid(double sigma_max, int N, GridScheme scheme, double grading) {
  if (!(sigma_max > 0.0)) throw InvalidParameter("make_radial_grid: sigma_max must be positive");
  if (N < 8) throw InvalidParameter("make_radial_grid: need at least 8 cells");
  RadialGrid g;
  g.N = N;
  g.scheme = scheme;
  g.sigma_max = sigma_max;
  g.grading = grading;
  g.iface.resize(N + 1);
  if (scheme == GridScheme::uniform) {
    for (int i = 0; i <= N; ++i) g.iface[i] = sigma_max * static_cast<double>(i) / N;
  } else {
    if (!(grading > 0.0)) throw InvalidParameter("make_radial_grid: grading must be positive");
    const double denom = std::expm1(grading);
    for (int i = 0; i <= N; ++i)
      g.iface[i] = sigma_max * std::expm1(grading * static_cast<double>(i) / N) / denom;
  }
  g.iface[0] = 0.0;
  g.iface[N] = sigma_max;
  g.node.resize(N);
  for (int i = 0; i < N; ++i) g.node[i] = 0.5 * (g.iface[i] + g.iface[i + 1]);
  return g;
}

RadialGrid grid_from_interfaces(std::vector<double> iface) {
  if (iface.size() < 9) throw InvalidParameter("grid_from_interfaces: need at least 8 cells");
  if (iface.front() != 0.0)
    throw InvalidParameter("grid_from_interfaces: first interface must sit at 0");
  for (std::size_t i = 1; i < iface.size(); ++i)
    if (!(iface[i] > iface[i - 1]))
      throw InvalidParameter("grid_from_interfaces: interfaces must increase strictly");
  RadialGrid g;
  g.N = static_cast<int>(iface.size()) - 1;
  g.sigma_max = iface.back();
  g.iface = std::move(iface);
  g.node.resize(g.N);
  for (int i = 0; i < g.N; ++i) g.node[i] = 0.5 * (g.iface[i] + g.iface[i + 1]);
  return g;
}

double default_sigma_max(const LinkModel& link, const MorsePotential& pot) {
  return (16.0 + 8.0 * (link.nu - 1)) / pot.lower_bound_a;
}

// ---------------------------------------------------------------------------
// mode decomposition
// ---------------------------------------------------------------------------

namespace {

struct SlotRef {
  int degree = 0, index = 0;
};

SlotRef slot_of(const LinkModel& L, int tuple_index) {
  for (int i = 0; i <= L.n; ++i)
    if (tuple_index < L.offset(i) + L.dim(i)) return {i, tuple_index - L.offset(i)};
  throw InvalidParameter("slot_of: tuple index out of range");
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> sparsity_components(const std::vector<Eigen::MatrixXd*>& mats,
                                                  int size, double tol) {
  UnionFind uf(size);
  for (int a = 0; a < size; ++a)
    for (int b = a + 1; b < size; ++b) {
      double w = 0.0;
      for (const Eigen::MatrixXd* M : mats) w += std::abs((*M)(a, b));
      if (w > tol) uf.unite(a, b);
    }
  std::vector<std::vector<int>> comps;
  std::vector<int> root_to_comp(size, -1);
  for (int a = 0; a < size; ++a) {
    int r = uf.find(a);
    if (root_to_comp[r] < 0) {
      root_to_comp[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[root_to_comp[r]].push_back(a);
  }
  return comps;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& M, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd S(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) S(a, b) = M(rows[a], cols[b]);
  return S;
}

void clean_small(Eigen::MatrixXd& M, double tol) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (std::abs(M(i, j)) < tol) M(i, j) = 0.0;
}

}  // namespace

DegreeDecomposition decompose_degree(const ModelAssembly& mdl, int degree) {
  const LinkModel& L = mdl.link;
  if (degree < 0 || degree > L.n + 1)
    throw InvalidParameter("decompose_degree: degree out of range");
  DegreeDecomposition out;
  out.degree = degree;
  out.sign = (degree % 2 == 0) ? 1 : -1;
  out.block = mdl.degree_blocks[degree];
  const int B = static_cast<int>(out.block.size());
  if (B == 0) return out;

  Eigen::MatrixXd S2 = mdl.S0 * mdl.S0;
  Eigen::MatrixXd P = submatrix(S2, out.block, out.block) +
                      out.sign * submatrix(mdl.S0, out.block, out.block);
  Eigen::MatrixXd Q = submatrix(mdl.Mh, out.block, out.block);
  Eigen::MatrixXd R = submatrix(mdl.Tsq, out.block, out.block);

  const double scale = std::max({1.0, P.cwiseAbs().maxCoeff(), Q.cwiseAbs().maxCoeff(),
                                 R.cwiseAbs().maxCoeff()});
  const double tol = 1e-12 * scale;
  std::vector<Eigen::MatrixXd*> mats = {&P, &Q, &R};

  for (const std::vector<int>& part : sparsity_components(mats, B, tol)) {
    Eigen::MatrixXd Pc = submatrix(P, part, part);
    Eigen::MatrixXd Qc = submatrix(Q, part, part);
    Eigen::MatrixXd Rc = submatrix(R, part, part);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pc);
    if (es.info() != Eigen::Success)
      throw NumericalFailure("decompose_degree: rotation eigensolve failed");
    Eigen::MatrixXd O = es.eigenvectors();
    Eigen::VectorXd qv = es.eigenvalues();
    Eigen::MatrixXd Qt = O.transpose() * Qc * O;
    Eigen::MatrixXd Rt = O.transpose() * Rc * O;
    clean_small(Qt, tol);
    clean_small(Rt, tol);
    for (int i = 0; i < qv.size(); ++i)
      if (std::abs(qv[i]) < tol) qv[i] = 0.0;

    // provenance of the parent part
    int sector = -2;  // -2 unset, -1 mixed
    bool sin_low_slot = false;
    for (int a : part) {
      SlotRef s = slot_of(L, out.block[a]);
      if (L.circle) {
        const ModeInfo& mi = L.degrees[s.degree][s.index];
        if (sector == -2)
          sector = mi.freq;
        else if (sector != mi.freq)
          sector = -1;
        if (s.degree == degree - 1 && mi.trig == 2) sin_low_slot = true;
      }
    }
    if (sector == -2) sector = -1;

    std::vector<Eigen::MatrixXd*> fin_mats = {&Qt, &Rt};
    for (const std::vector<int>& fin :
         sparsity_components(fin_mats, static_cast<int>(part.size()), 0.0)) {
      ModeComponent mc;
      mc.tuple_indices.reserve(part.size());
      for (int a : part) mc.tuple_indices.push_back(out.block[a]);
      mc.basis.resize(part.size(), fin.size());
      for (std::size_t c = 0; c < fin.size(); ++c) mc.basis.col(c) = O.col(fin[c]);
      mc.Qt = submatrix(Qt, fin, fin);
      mc.Rt = submatrix(Rt, fin, fin);
      for (std::size_t c = 0; c < fin.size(); ++c) {
        ModeRecord rec;
        rec.q = qv[fin[c]];
        double disc = rec.q + 0.25;
        if (disc < -1e-9)
          throw AssemblyError("decompose_degree: indicial discriminant below -1/4");
        disc = std::max(disc, 0.0);
        rec.mu = std::sqrt(disc);
        rec.alpha = 0.5 + rec.mu;
        rec.borderline = rec.mu < 1.0 - 1e-9;
        rec.decay = std::sqrt(std::max(mc.Rt(c, c), 1e-4));
        rec.sector = sector;
        mc.fields.push_back(rec);
      }

      // Tagged modes of the curve model: in the middle degree, the component
      // descending from a (sin, dphi) pair in sectors 0 < k < m carries the
      // branch-matched realization; everything else keeps Friedrichs.
      if (mdl.standard_curve && degree == L.nu && fin.size() == 1 && sin_low_slot &&
          sector >= 1 && sector <= L.m - 1) {
        ModeRecord& rec = mc.fields[0];
        const double q_expect =
            (static_cast<double>(sector) / L.m - 1.0) * (static_cast<double>(sector) / L.m - 1.0) -
            0.25;
        if (std::abs(rec.q - q_expect) <= 1e-9 && mc.Qt(0, 0) == 0.0 &&
            std::abs(mc.Rt(0, 0) - 1.0) <= 1e-12) {
          rec.bc = BCType::branch_matched;
          rec.mu = std::sqrt(rec.q + 0.25);
        }
      }

      for (std::size_t c = 0; c < fin.size(); ++c) {
        const ModeRecord& rec = mc.fields[c];
        if (degree == L.nu && rec.borderline && rec.bc == BCType::friedrichs &&
            !mdl.standard_curve) {
          char buf[160];
          std::snprintf(buf, sizeof(buf),
                        "degree %d sector %d: borderline indicial exponents (q=%.6g); using the "
                        "Friedrichs extension, spectrum may depend on the tip condition",
                        degree, rec.sector, rec.q);
          out.warnings.emplace_back(buf);
        }
      }
      out.comps.push_back(std::move(mc));
    }
  }
  return out;
}

double weight_eval(const ModeRecord& rec, double sigma) {
  if (sigma <= 0.0) return 0.0;
  if (rec.bc == BCType::branch_matched)
    return std::sqrt(sigma) * std::cyl_bessel_k(rec.mu, sigma);
  return std::pow(sigma, rec.alpha) * std::exp(-rec.decay * sigma);
}

// ---------------------------------------------------------------------------
// radial assembly and solve
// ---------------------------------------------------------------------------

namespace {

constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                               0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                               0.3478548451374538};

template <class F>
double gauss4(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += kGaussW[k] * f(mid + half * kGaussX[k]);
  return s * half;
}

// integral_0^b sigma^p e^{-c sigma} d sigma for p > -1, c b small
double power_exp_integral(double p, double c, double b) {
  double sum = 0.0, term = std::pow(b, p + 1.0);
  for (int j = 0; j < 80; ++j) {
    const double add = term / (p + 1.0 + j);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    term *= -c * b / (j + 1.0);
  }
  return sum;
}

// integral_0^b sigma K_mu(sigma)^2 d sigma: geometric composite plus the
// analytic tail of the leading small-sigma branch
double bessel_mass_first_cell(double mu, double b) {
  double total = 0.0;
  double hi = b;
  const auto f = [mu](double s) {
    const double K = std::cyl_bessel_k(mu, s);
    return s * K * K;
  };
  for (int j = 0; j < 60; ++j) {
    const double lo = hi * 0.5;
    total += gauss4(f, lo, hi);
    hi = lo;
  }
  const double A = 0.5 * std::tgamma(mu) * std::pow(2.0, mu);
  total += A * A * std::pow(hi, 2.0 - 2.0 * mu) / (2.0 - 2.0 * mu);
  return total;
}

struct FieldCoeffs {
  ModeRecord rec;
  std::vector<double> w_iface;  // weight at interfaces 1..N (index 0 unused)
  std::vector<double> mass;     // cell masses
};

}  // namespace

namespace detail {

struct ComponentSystem {
  int F = 0, N = 0;
  BandedSym Ahat;            // symmetrized operator
  Eigen::VectorXd sqrtmass;  // per DOF
};

ComponentSystem assemble_component(const ModeComponent& comp, const RadialGrid& grid) {
  const int F = static_cast<int>(comp.fields.size());
  const int N = grid.N;
  const int ndof = F * N;
  const auto idx = [F](int cell, int e) { return cell * F + e; };

  std::vector<FieldCoeffs> fc(F);
  for (int e = 0; e < F; ++e) {
    fc[e].rec = comp.fields[e];
    fc[e].w_iface.resize(N + 1, 0.0);
    for (int i = 1; i <= N; ++i) fc[e].w_iface[i] = weight_eval(fc[e].rec, grid.iface[i]);
    fc[e].mass.resize(N, 0.0);
    const ModeRecord& rec = fc[e].rec;
    if (rec.bc == BCType::branch_matched) {
      if (F != 1) throw AssemblyError("assemble_component: branch-matched field in a coupled block");
      fc[e].mass[0] = bessel_mass_first_cell(rec.mu, grid.iface[1]);
    } else {
      fc[e].mass[0] = power_exp_integral(2.0 * rec.alpha, 2.0 * rec.decay, grid.iface[1]);
    }
    for (int i = 1; i < N; ++i) {
      const ModeRecord& r = rec;
      fc[e].mass[i] = gauss4(
          [&r](double s) {
            const double w = weight_eval(r, s);
            return w * w;
          },
          grid.iface[i], grid.iface[i + 1]);
    }
  }

  BandedSym A = BandedSym::zero(ndof, F);
  Eigen::VectorXd mass(ndof);
  for (int e = 0; e < F; ++e)
    for (int i = 0; i < N; ++i) mass[idx(i, e)] = fc[e].mass[i];

  // fluxes at interior interfaces and the Dirichlet ghost at sigma_max
  for (int e = 0; e < F; ++e) {
    for (int i = 1; i < N; ++i) {
      const double w = fc[e].w_iface[i];
      const double flux = w * w / (grid.node[i] - grid.node[i - 1]);
      A.add(idx(i - 1, e), idx(i - 1, e), flux);
      A.add(idx(i, e), idx(i, e), flux);
      A.add(idx(i, e), idx(i - 1, e), -flux);
    }
    const double wN = fc[e].w_iface[N];
    A.add(idx(N - 1, e), idx(N - 1, e), wN * wN / (grid.sigma_max - grid.node[N - 1]));
  }

  // potential terms: (C1 / sigma + C0) w_e w_f per cell
  for (int e = 0; e < F; ++e) {
    const ModeRecord& re = fc[e].rec;
    for (int f = 0; f <= e; ++f) {
      const ModeRecord& rf = fc[f].rec;
      double C1, C0;
      if (e == f) {
        if (re.bc == BCType::branch_matched) continue;  // weight solves the mode exactly
        C1 = comp.Qt(e, e) + 2.0 * re.alpha * re.decay;
        C0 = comp.Rt(e, e) - re.decay * re.decay;
      } else {
        C1 = comp.Qt(e, f);
        C0 = comp.Rt(e, f);
      }
      if (std::abs(C1) < 3e-13 * std::max(1.0, 2.0 * re.alpha * re.decay)) C1 = 0.0;
      if (C1 == 0.0 && C0 == 0.0) continue;
      if (re.bc == BCType::branch_matched || rf.bc == BCType::branch_matched)
        throw AssemblyError("assemble_component: residual potential on a branch-matched field");

      const double p_sum = re.alpha + rf.alpha;
      const double c_sum = re.decay + rf.decay;
      // first cell analytically, the rest by quadrature
      double v0 = C1 * power_exp_integral(p_sum - 1.0, c_sum, grid.iface[1]) +
                  C0 * power_exp_integral(p_sum, c_sum, grid.iface[1]);
      A.add(idx(0, e), idx(0, f), v0);
      for (int i = 1; i < N; ++i) {
        const double v = gauss4(
            [&](double s) {
              return (C1 / s + C0) * weight_eval(re, s) * weight_eval(rf, s);
            },
            grid.iface[i], grid.iface[i + 1]);
        A.add(idx(i, e), idx(i, f), v);
      }
    }
  }

  ComponentSystem sys;
  sys.F = F;
  sys.N = N;
  sys.sqrtmass = mass.cwiseSqrt();
  for (int j = 0; j < ndof; ++j) {
    const int top = std::min(F, ndof - 1 - j);
    for (int d = 0; d <= top; ++d) A.ab(d, j) /= sys.sqrtmass[j] * sys.sqrtmass[j + d];
  }
  sys.Ahat = std::move(A);
  return sys;
}

}  // namespace detail

namespace {

ComponentSpectrum solve_component(const ModeComponent& comp, const RadialGrid& grid, int J,
                                  double tau_sigma) {
  detail::ComponentSystem sys = detail::assemble_component(comp, grid);
  const int ndof = sys.F * sys.N;

  ComponentSpectrum cs;
  cs.comp = comp;
  EigenPairs pairs;
  if (sys.F == 1) {
    Eigen::VectorXd d(ndof), e(ndof - 1);
    for (int j = 0; j < ndof; ++j) d[j] = sys.Ahat.ab(0, j);
    for (int j = 0; j + 1 < ndof; ++j) e[j] = sys.Ahat.ab(1, j);
    cs.kernel_count = eig_tridiag_count_below(d, e, tau_sigma);
    pairs = eig_tridiag_lowest(d, e, std::min(std::max(J, cs.kernel_count + 1), ndof));
  } else {
    cs.kernel_count = eig_banded_count_below(sys.Ahat, tau_sigma);
    pairs = eig_banded_lowest(sys.Ahat, std::min(std::max(J, cs.kernel_count + 1), ndof));
  }
  cs.evals_sigma = pairs.values;
  cs.residuals = pairs.residuals;
  cs.vectors = pairs.vectors;
  for (int c = 0; c < cs.vectors.cols(); ++c)
    cs.vectors.col(c).array() /= sys.sqrtmass.array();
  return cs;
}

}  // namespace

SpectralReport compute_spectrum(const ModelAssembly& mdl, int degree, const RadialGrid& grid,
                                int J) {
  if (J < 1) throw InvalidParameter("compute_spectrum: need at least one eigenvalue");
  DegreeDecomposition dec = decompose_degree(mdl, degree);

  SpectralReport rep;
  rep.degree = degree;
  rep.t = mdl.t;
  rep.warnings = dec.warnings;
  const double t2 = mdl.t * mdl.t;
  rep.tau_split = std::max(1e-6 * t2, 1e-8);
  const double tau_sigma = rep.tau_split / t2;

  struct Entry {
    double lam;
    int ci, k;
  };
  std::vector<Entry> entries;
  for (const ModeComponent& comp : dec.comps) {
    ComponentSpectrum cs = solve_component(comp, grid, J, tau_sigma);
    const int ci = static_cast<int>(rep.components.size());
    for (std::size_t k = 0; k < cs.evals_sigma.size(); ++k)
      entries.push_back({cs.evals_sigma[k], ci, static_cast<int>(k)});
    rep.kernel_dim += cs.kernel_count;
    rep.components.push_back(std::move(cs));
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.lam < b.lam; });

  const int keep = std::min<std::size_t>(J, entries.size());
  for (int k = 0; k < keep; ++k) {
    rep.eigenvalues.push_back(t2 * entries[k].lam);
    rep.residuals.push_back(rep.components[entries[k].ci].residuals[entries[k].k]);
    rep.comp_index.push_back(entries[k].ci);
    rep.comp_member.push_back(entries[k].k);
  }

  rep.gap_lower = std::numeric_limits<double>::infinity();
  for (const ComponentSpectrum& cs : rep.components)
    for (double lam : cs.evals_sigma)
      if (lam >= tau_sigma) {
        rep.gap_lower = std::min(rep.gap_lower, t2 * lam);
        break;
      }
  return rep;
}

Eigen::MatrixXd component_profiles(const ComponentSpectrum& cs, const RadialGrid& grid,
                                   int which) {
  const int F = static_cast<int>(cs.comp.fields.size());
  if (which < 0 || which >= cs.vectors.cols())
    throw InvalidParameter("component_profiles: eigenvector index out of range");
  Eigen::MatrixXd U(grid.N, F);
  for (int i = 0; i < grid.N; ++i)
    for (int e = 0; e < F; ++e)
      U(i, e) = weight_eval(cs.comp.fields[e], grid.node[i]) * cs.vectors(i * F + e, which);
  return U;
}

// ---------------------------------------------------------------------------
// diagnostics
// ---------------------------------------------------------------------------

RescalingReport verify_rescaling(const LinkModel& link, const MorsePotential& pot, int degree,
                                 double t, int J, int N, bool rescaled_grid) {
  if (!(t > 0.0)) throw InvalidParameter("verify_rescaling: t must be positive");
  RescalingReport rr;
  rr.t = t;
  rr.degree = degree;
  rr.J = J;
  rr.rescaled_grid = rescaled_grid;

  const double smax = default_sigma_max(link, pot);
  RadialGrid base = make_radial_grid(smax, N);  // serves as the r-grid at t = 1

  ModelAssembly a1 = make_assembly(link, pot, 1.0);
  ModelAssembly at = make_assembly(link, pot, t);

  RadialGrid grid_t;
  if (rescaled_grid) {
    // the image of the base grid under r -> r/t, mapped back to sigma = t r
    std::vector<double> iface_t(base.iface.size());
    for (std::size_t i = 0; i < base.iface.size(); ++i) iface_t[i] = t * (base.iface[i] / t);
    grid_t = grid_from_interfaces(std::move(iface_t));
  } else {
    // same domain, different layout: the two discretizations are no longer
    // images of one another, so the defect measures discretization
    // non-covariance instead of being zero by construction
    grid_t = make_radial_grid(smax, N, GridScheme::uniform);
  }
  SpectralReport s1 = compute_spectrum(a1, degree, base, J);
  SpectralReport st = compute_spectrum(at, degree, grid_t, J);

  // kernel eigenvalues are numerical zeros on both sides; their deviation is
  // measured against the smallest admissible nonzero scale (the gap bound)
  // rather than 0/0
  const double tau = std::max(1e-2 * t * t, 1e-12);
  const std::size_t cnt = std::min(s1.eigenvalues.size(), st.eigenvalues.size());
  for (std::size_t j = 0; j < cnt; ++j) {
    const double scaled = t * t * s1.eigenvalues[j];
    rr.lam_t.push_back(st.eigenvalues[j]);
    rr.lam_scaled.push_back(scaled);
    const double defect = std::abs(st.eigenvalues[j] - scaled) / std::max(scaled, tau);
    rr.max_defect = std::max(rr.max_defect, defect);
  }
  return rr;
}

GapFit fit_power_law(const std::vector<std::pair<double, double>>& t_lambda) {
  if (t_lambda.size() < 2)
    throw InvalidParameter("fit_power_law: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [t, lam] : t_lambda) {
    if (!(t > 0.0)) throw InvalidParameter("fit_power_law: nonpositive t");
    if (!(lam > 0.0) || !std::isfinite(lam))
      throw NumericalFailure("fit_power_law: degenerate fit, eigenvalue at or below zero");
    const double x = std::log(t), y = std::log(lam);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(t_lambda.size());
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-14) throw InvalidParameter("fit_power_law: t values must differ");
  GapFit fit;
  fit.p = (n * sxy - sx * sy) / det;
  fit.c = std::exp((sy - fit.p * sx) / n);
  return fit;
}

// ---------------------------------------------------------------------------
// exact references
// ---------------------------------------------------------------------------

KernelOracle explicit_kernel_pm(const LinkModel& link, int sign, int degree) {
  if (sign != 1 && sign != -1) throw InvalidParameter("explicit_kernel_pm: sign must be +-1");
  if (degree < 0 || degree > link.n + 1)
    throw InvalidParameter("explicit_kernel_pm: degree out of range");
  KernelOracle ko;
  ko.degree = degree;
  const int nu = link.nu;
  int slot = -1;
  if (sign == 1 && degree < nu) slot = degree;
  if (sign == -1 && degree > nu) slot = degree - 1;
  if (slot < 0) return ko;
  const double power =
      (sign == 1) ? 0.5 * link.n - slot : slot - 0.5 * link.n;
  for (int j = 0; j < link.dim(slot); ++j)
    if (link.degrees[slot][j].harmonic) ko.elements.push_back({slot, j, power});
  ko.dim = static_cast<int>(ko.elements.size());
  return ko;
}

BesselOracle bessel_kernel_oracle(int m, double t, const RadialGrid& grid) {
  if (m < 1) throw InvalidParameter("bessel_kernel_oracle: m must be a positive integer");
  if (!(t > 0.0)) throw InvalidParameter("bessel_kernel_oracle: t must be positive");
  BesselOracle bo;
  bo.m = m;
  bo.t = t;
  for (int k = 1; k < m; ++k) {
    const double nu = static_cast<double>(k) / m;
    if (!(nu > 0.0 && nu < 1.0))
      throw InvalidParameter("bessel_kernel_oracle: order outside (0,1)");
    bo.orders.push_back(nu);
  }
  bo.profiles.resize(grid.N, static_cast<int>(bo.orders.size()));
  for (std::size_t c = 0; c < bo.orders.size(); ++c)
    for (int i = 0; i < grid.N; ++i) {
      const double r = grid.node[i] / t;
      bo.profiles(i, static_cast<int>(c)) = std::sqrt(r) * std::cyl_bessel_k(bo.orders[c], t * r);
    }

  // independent check that each profile solves -u'' + ((nu^2-1/4)/r^2 + t^2) u = 0
  for (double nu : bo.orders) {
    const auto u = [nu, t](double r) { return std::sqrt(r) * std::cyl_bessel_k(nu, t * r); };
    const double delta = 3e-3 / t;  // balances stencil truncation against roundoff
    for (int s = 0; s < 120; ++s) {
      const double r = (0.5 + 5.5 * s / 119.0) / t;
      const double upp = (2.0 * u(r - 3 * delta) - 27.0 * u(r - 2 * delta) +
                          270.0 * u(r - delta) - 490.0 * u(r) + 270.0 * u(r + delta) -
                          27.0 * u(r + 2 * delta) + 2.0 * u(r + 3 * delta)) /
                         (180.0 * delta * delta);
      const double res = -upp + ((nu * nu - 0.25) / (r * r) + t * t) * u(r);
      bo.max_ode_residual = std::max(bo.max_ode_residual, std::abs(res) / (t * t * u(r)));
    }
  }
  return bo;
}

}  // namespace conespec
