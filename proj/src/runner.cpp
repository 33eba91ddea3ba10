#include "conespec/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "conespec/errors.hpp"
#include "conespec/global_surface.hpp"
#include "conespec/ih.hpp"
#include "conespec/link_model.hpp"
#include "conespec/model_operator.hpp"
#include "conespec/morse_check.hpp"

namespace conespec {

namespace {

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError({"cannot write '" + tmp.string() + "'"});
    out << content;
    if (!out.flush()) throw ConfigError({"cannot write '" + tmp.string() + "'"});
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw ConfigError({"cannot rename '" + tmp.string() + "' to '" + path + "'"});
}

struct Csv {
  std::string body = "degree,t,index,eigenvalue,residual\n";
  void row(int degree, double t, int index, double eig, double res) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%d,%.17g,%.17g\n", degree, t, index, eig, res);
    body += buf;
  }
};

struct Report {
  std::vector<std::string> results;
  void add(const std::string& line) { results.push_back(line); }

  std::string assemble(const RunConfig& cfg, bool pass, const std::string& verdict) const {
    std::string body = "conespec " + cfg.command + " report\n";
    body += "verdict: " + std::string(pass ? "PASS" : "FAIL") + "\n";
    if (!verdict.empty()) body += "summary: " + verdict + "\n";
    body += "\n[results]\n";
    for (const auto& line : results) body += line + "\n";
    body += "\n[resolved configuration]\n";
    for (const auto& [key, value] : cfg.resolved) body += key + " = " + value + "\n";
    return body;
  }
};

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (int x : v) {
    if (!s.empty()) s += ",";
    s += std::to_string(x);
  }
  return s;
}

LinkModel build_link(const RunConfig& cfg) {
  if (cfg.link_kind == "circle") return make_circle_link(cfg.link_m, cfg.link_K);
  // harmonic-only abstract link: betti[i] zero-eigenvalue modes per degree
  std::vector<std::vector<ModeInfo>> modes(cfg.link_n + 1);
  for (int i = 0; i <= cfg.link_n; ++i)
    for (int j = 0; j < cfg.link_betti[i]; ++j)
      modes[i].push_back({0.0, true, "h" + std::to_string(i) + "_" + std::to_string(j), 0, 0});
  return make_abstract_link(cfg.link_n, cfg.link_betti, modes);
}

MorsePotential build_potential(const RunConfig& cfg, const LinkModel& link) {
  if (cfg.pot_kind == "curve")
    return make_circle_potential(link, TrigPoly::cosine(link.m, link.m));
  return make_constant_potential(link, cfg.pot_c);
}

RadialGrid build_grid(const RunConfig& cfg, double t) {
  const double sigma_max = cfg.r_max_given ? t * cfg.r_max : 10.0;
  const GridScheme scheme =
      cfg.grid_scheme == "uniform" ? GridScheme::uniform : GridScheme::graded;
  return make_radial_grid(sigma_max, cfg.grid_N, scheme);
}

// the combinatorial oracle datum for potentials that have one
std::optional<ConeMorseDatum> oracle_datum(const LinkModel& link, const MorsePotential& pot,
                                           bool standard_curve) {
  if (standard_curve) return ConeMorseDatum{link.nu, link.betti, Halflink::points(link.m)};
  if (pot.constant && pot.constant_value > 0)
    return ConeMorseDatum{link.nu, link.betti, Halflink::empty()};
  if (pot.constant && pot.constant_value < 0)
    return ConeMorseDatum{link.nu, link.betti, Halflink::full_link()};
  return std::nullopt;
}

// ---------------------------------------------------------------------------

RunOutcome do_link_validate(const RunConfig& cfg, Report& rep, Csv& csv) {
  LinkModel link = build_link(cfg);
  LinkDiagnostics d = validate_link(link);
  const double tol = cfg.tol_link_given ? cfg.tol_link : d.tolerance;
  const bool pass = d.max_d2 <= tol && d.max_adjoint_defect <= tol && d.max_eigen_defect <= tol;

  rep.add("link kind = " + cfg.link_kind + ", dim = " + std::to_string(link.n) +
          ", betti = " + join_ints(link.betti));
  rep.add("max |d~^2|            = " + fmt17(d.max_d2));
  rep.add("max adjoint defect    = " + fmt17(d.max_adjoint_defect));
  rep.add("max eigenvalue defect = " + fmt17(d.max_eigen_defect));
  rep.add("tolerance             = " + fmt17(tol));
  for (int i = 0; i <= link.n; ++i)
    for (int j = 0; j < link.dim(i); ++j)
      csv.row(i, 0.0, j, link.degrees[i][j].eigenvalue, d.max_eigen_defect);

  RunOutcome out;
  out.pass = pass;
  out.verdict = pass ? "link diagnostics within tolerance" : "link diagnostics above tolerance";
  return out;
}

RunOutcome do_model_spectrum(const RunConfig& cfg, Report& rep, Csv& csv) {
  LinkModel link = build_link(cfg);
  MorsePotential pot = build_potential(cfg, link);
  ModelAssembly mdl = make_assembly(link, pot, cfg.t);
  RadialGrid grid = build_grid(cfg, cfg.t);

  bool warned = false;
  for (int deg = 0; deg <= link.n + 1; ++deg) {
    SpectralReport sr = compute_spectrum(mdl, deg, grid, cfg.J);
    rep.add("degree " + std::to_string(deg) + ": kernel_dim = " + std::to_string(sr.kernel_dim) +
            ", tau_split = " + fmt17(sr.tau_split) + ", gap_lower = " + fmt17(sr.gap_lower));
    for (const auto& w : sr.warnings) {
      rep.add("  warning: " + w);
      warned = true;
    }
    for (std::size_t j = 0; j < sr.eigenvalues.size(); ++j)
      csv.row(deg, cfg.t, static_cast<int>(j), sr.eigenvalues[j], sr.residuals[j]);
  }
  RunOutcome out;
  out.pass = true;
  out.verdict = warned ? "spectra computed (with warnings)" : "spectra computed";
  return out;
}

RunOutcome do_model_gap(const RunConfig& cfg, Report& rep, Csv& csv) {
  LinkModel link = build_link(cfg);
  MorsePotential pot = build_potential(cfg, link);

  std::vector<std::pair<double, double>> samples;
  for (double t : cfg.t_list) {
    ModelAssembly mdl = make_assembly(link, pot, t);
    RadialGrid grid = build_grid(cfg, t);
    double gap = std::numeric_limits<double>::infinity();
    for (int deg = 0; deg <= link.n + 1; ++deg) {
      SpectralReport sr = compute_spectrum(mdl, deg, grid, cfg.J);
      gap = std::min(gap, sr.gap_lower);
      const int idx = std::min<int>(sr.kernel_dim, static_cast<int>(sr.residuals.size()) - 1);
      csv.row(deg, t, sr.kernel_dim, sr.gap_lower, idx >= 0 ? sr.residuals[idx] : 0.0);
    }
    samples.emplace_back(t, gap);
    rep.add("t = " + fmt17(t) + ": first nonzero eigenvalue = " + fmt17(gap));
  }
  GapFit fit = fit_power_law(samples);
  const bool pass = fit.p >= cfg.tol_slope_min && fit.p <= cfg.tol_slope_max;
  rep.add("fit: lambda ~ c t^p with c = " + fmt17(fit.c) + ", p = " + fmt17(fit.p));
  rep.add("slope window = [" + fmt17(cfg.tol_slope_min) + ", " + fmt17(cfg.tol_slope_max) + "]");

  RunOutcome out;
  out.pass = pass;
  out.verdict = "fitted gap exponent p = " + fmt17(fit.p) + (pass ? " inside" : " outside") +
                " the expected window";
  return out;
}

RunOutcome do_model_kernel(const RunConfig& cfg, Report& rep, Csv& csv) {
  LinkModel link = build_link(cfg);
  MorsePotential pot = build_potential(cfg, link);
  ModelAssembly mdl = make_assembly(link, pot, cfg.t);
  RadialGrid grid = build_grid(cfg, cfg.t);
  const double t2 = cfg.t * cfg.t;

  std::vector<int> dims;
  double max_kernel_eig = 0.0;
  double gap_lower = std::numeric_limits<double>::infinity();
  for (int deg = 0; deg <= link.n + 1; ++deg) {
    SpectralReport sr = compute_spectrum(mdl, deg, grid, cfg.J);
    dims.push_back(sr.kernel_dim);
    for (int j = 0; j < sr.kernel_dim && j < static_cast<int>(sr.eigenvalues.size()); ++j)
      max_kernel_eig = std::max(max_kernel_eig, std::abs(sr.eigenvalues[j]));
    gap_lower = std::min(gap_lower, sr.gap_lower);
    for (std::size_t j = 0; j < sr.eigenvalues.size(); ++j)
      csv.row(deg, cfg.t, static_cast<int>(j), sr.eigenvalues[j], sr.residuals[j]);
  }
  rep.add("kernel dims by degree = " + join_ints(dims));
  rep.add("max kernel |eigenvalue| = " + fmt17(max_kernel_eig) +
          "  (bound " + fmt17(cfg.tol_kernel * t2) + ")");
  rep.add("first non-kernel eigenvalue = " + fmt17(gap_lower));

  bool pass = max_kernel_eig <= cfg.tol_kernel * t2;
  std::string verdict;
  if (auto datum = oracle_datum(link, pot, mdl.standard_curve)) {
    const std::vector<int> expected = morse_contribution(*datum);
    rep.add("combinatorial dims      = " + join_ints(expected));
    const bool match = dims == expected;
    pass = pass && match;
    verdict = match ? "kernel dims match the combinatorial oracle"
                    : "kernel dims disagree with the combinatorial oracle";
  } else {
    rep.add("combinatorial dims      = (no oracle for this potential)");
    verdict = "kernel dims computed (no combinatorial oracle)";
  }
  if (mdl.standard_curve) {
    const bool gap_ok = gap_lower >= cfg.tol_gap * t2;
    rep.add("gap bound               = " + fmt17(cfg.tol_gap * t2) +
            (gap_ok ? "  (satisfied)" : "  (violated)"));
    pass = pass && gap_ok;
  }

  RunOutcome out;
  out.pass = pass;
  out.verdict = verdict;
  return out;
}

RunOutcome do_ih(const RunConfig& cfg, Report& rep, Csv& csv) {
  ConeMorseDatum datum;
  datum.nu = cfg.ih_nu;
  datum.bettiL = cfg.ih_betti;
  if (cfg.ih_halflink == "empty")
    datum.halflink = Halflink::empty();
  else if (cfg.ih_halflink == "full")
    datum.halflink = Halflink::full_link();
  else if (cfg.ih_halflink == "points")
    datum.halflink = Halflink::points(cfg.ih_points_m);
  else
    datum.halflink = Halflink::custom(cfg.ih_lminus_betti, cfg.ih_ranks);

  const std::vector<int> contrib = morse_contribution(datum);
  rep.add("halflink = " + cfg.ih_halflink + ", nu = " + std::to_string(cfg.ih_nu) +
          ", link betti = " + join_ints(cfg.ih_betti));
  rep.add("degree   m_p^i");
  for (std::size_t i = 0; i < contrib.size(); ++i) {
    rep.add("  " + std::to_string(i) + "      " + std::to_string(contrib[i]));
    csv.row(static_cast<int>(i), 0.0, 0, static_cast<double>(contrib[i]), 0.0);
  }
  rep.add("contribution = " + join_ints(contrib));

  RunOutcome out;
  out.pass = true;
  out.verdict = "m_p = (" + join_ints(contrib) + ")";
  return out;
}

std::vector<int> parse_artifact_list(const std::string& line) {
  std::vector<int> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    out.push_back(std::stoi(item.substr(a, b - a + 1)));
  }
  return out;
}

RunOutcome do_morse_check(const RunConfig& cfg, Report& rep, Csv& csv) {
  std::vector<int> counts = cfg.morse_counts, betti = cfg.morse_betti;
  if (!cfg.morse_artifact.empty()) {
    std::ifstream in(cfg.morse_artifact);
    if (!in) throw ConfigError({"cannot read artifact '" + cfg.morse_artifact + "'"});
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("counts = ", 0) == 0) counts = parse_artifact_list(line.substr(9));
      if (line.rfind("betti = ", 0) == 0) betti = parse_artifact_list(line.substr(8));
    }
    if (counts.empty() || betti.empty())
      throw ConfigError({"artifact '" + cfg.morse_artifact +
                         "' has no 'counts = ...' / 'betti = ...' lines"});
    rep.add("counts/betti read from " + cfg.morse_artifact);
  }

  MorseCounts mc;
  mc.total = counts;
  mc.betti2 = betti;
  InequalityVerdict v = check_inequalities(mc);

  rep.add("counts = " + join_ints(counts));
  rep.add("betti = " + join_ints(betti));
  rep.add("k   margin");
  for (std::size_t k = 0; k < v.margins.size(); ++k) {
    rep.add("  " + std::to_string(k) + "   " + std::to_string(v.margins[k]));
    csv.row(static_cast<int>(k), 0.0, 0, static_cast<double>(v.margins[k]), 0.0);
  }
  rep.add("euler: counts " + std::to_string(v.euler_c) + ", betti " + std::to_string(v.euler_b) +
          (v.euler_ok ? " (equal)" : " (NOT equal)"));
  if (!v.pass && v.first_failure_k >= 0)
    rep.add("first failure at k = " + std::to_string(v.first_failure_k));

  RunOutcome out;
  out.pass = v.pass;
  out.verdict = v.pass ? "Morse inequalities hold"
                       : (v.first_failure_k >= 0
                              ? "Morse inequality fails at k = " +
                                    std::to_string(v.first_failure_k)
                              : "Euler characteristics disagree");
  return out;
}

RunOutcome do_global_demo(const RunConfig& cfg, Report& rep, Csv& csv) {
  GlobalSurface surf = build_preset(preset_from_name(cfg.g_preset), cfg.g_m, cfg.g_N, cfg.g_K);
  GlobalCounts counts = count_small_eigenvalues(surf, cfg.g_t, 1.0, cfg.g_t0);

  rep.add("preset = " + cfg.g_preset + ", m = " + std::to_string(cfg.g_m) +
          ", N = " + std::to_string(cfg.g_N) + ", K_fourier = " + std::to_string(cfg.g_K));
  rep.add("degree   count(t = " + fmt17(cfg.g_t) + ")   expected c_i(f)");
  for (int i = 0; i < 3; ++i)
    rep.add("  " + std::to_string(i) + "        " + std::to_string(counts.counts[i]) +
            "               " + std::to_string(surf.expected_counts[i]));
  rep.add("euler = " + std::to_string(counts.euler));
  rep.add("lambda_next = " + fmt17(counts.lambda_next) +
          ", max small |eigenvalue| = " + fmt17(counts.max_small));
  // machine-readable lines: morse-check reads these as an artifact
  rep.add("counts = " + std::to_string(counts.counts[0]) + "," +
          std::to_string(counts.counts[1]) + "," + std::to_string(counts.counts[2]));
  rep.add("betti = " + std::to_string(surf.betti[0]) + "," + std::to_string(surf.betti[1]) + "," +
          std::to_string(surf.betti[2]));

  MorseCounts mcounts;
  mcounts.total = {counts.counts[0], counts.counts[1], counts.counts[2]};
  mcounts.betti2 = {surf.betti[0], surf.betti[1], surf.betti[2]};
  InequalityVerdict v = check_inequalities(mcounts);
  rep.add("morse margins = " + std::to_string(v.margins.size() > 0 ? v.margins[0] : 0) + "," +
          std::to_string(v.margins.size() > 1 ? v.margins[1] : 0) +
          (v.pass ? " (inequalities hold)" : " (inequalities FAIL)"));

  for (int d = 0; d < 3; ++d)
    csv.row(d, cfg.g_t, counts.counts[d], counts.lambda_next_by_degree[d],
            counts.max_small_by_degree[d]);

  GapScan scan = gap_growth_scan(surf, cfg.g_t_list, cfg.g_t0);
  rep.add("gap scan (t, lambda_next, max_small):");
  for (const auto& pt : scan.points) {
    rep.add("  " + fmt17(pt.t) + "  " + fmt17(pt.lambda_next) + "  " + fmt17(pt.max_small));
    for (int d = 0; d < 3; ++d)
      csv.row(d, pt.t, pt.counts[d], pt.lambda_next_by_degree[d], pt.max_small_by_degree[d]);
  }
  rep.add("fit: lambda_next ~ c t^p with c = " + fmt17(scan.fit.c) +
          ", p = " + fmt17(scan.fit.p) + "  (required p >= " + fmt17(cfg.tol_global_slope) + ")");
  const GapScanPoint& last = scan.points.back();
  rep.add("max small |eigenvalue| at t = " + fmt17(last.t) + ": " + fmt17(last.max_small) +
          "  (bound " + fmt17(cfg.tol_small) + ")");

  const bool pass = counts.matches_expected && v.pass && scan.fit.p >= cfg.tol_global_slope &&
                    last.max_small <= cfg.tol_small;
  RunOutcome out;
  out.pass = pass;
  out.verdict = counts.matches_expected
                    ? (pass ? "counts match c_i(f) and the gap grows"
                            : "counts match but a gap/smallness bound failed")
                    : "counts disagree with c_i(f)";
  return out;
}

}  // namespace

RunOutcome run_command(const RunConfig& cfg) {
  Report rep;
  Csv csv;
  RunOutcome out;
  if (cfg.command == "link-validate")
    out = do_link_validate(cfg, rep, csv);
  else if (cfg.command == "model-spectrum")
    out = do_model_spectrum(cfg, rep, csv);
  else if (cfg.command == "model-gap")
    out = do_model_gap(cfg, rep, csv);
  else if (cfg.command == "model-kernel")
    out = do_model_kernel(cfg, rep, csv);
  else if (cfg.command == "ih")
    out = do_ih(cfg, rep, csv);
  else if (cfg.command == "morse-check")
    out = do_morse_check(cfg, rep, csv);
  else if (cfg.command == "global-demo")
    out = do_global_demo(cfg, rep, csv);
  else
    throw ConfigError({"unknown command '" + cfg.command + "'"});

  atomic_write(cfg.out_csv, csv.body);
  atomic_write(cfg.out_report, rep.assemble(cfg, out.pass, out.verdict));
  out.report_path = cfg.out_report;
  out.csv_path = cfg.out_csv;
  return out;
}

int run_cli(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    RunOutcome outcome = run_command(cfg);
    out << (outcome.pass ? "PASS" : "FAIL") << ": " << outcome.verdict << "\n";
    out << "report: " << outcome.report_path << "\n";
    out << "csv:    " << outcome.csv_path << "\n";
    return outcome.exit_code();
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors) err << "config error: " << msg << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace conespec
