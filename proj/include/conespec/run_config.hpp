#pragma once

#include <string>
#include <utility>
#include <vector>

namespace conespec {

// Fully resolved run configuration: the parsed file plus every default the
// command fills in. `resolved` lists all section.key = value pairs in a fixed
// order for embedding into reports.
struct RunConfig {
  std::string command;

  // [run]
  double t = 0.0;
  bool t_given = false;
  std::vector<double> t_list;
  int J = 10;

  // [link]
  std::string link_kind;  // circle | abstract
  int link_m = 0;
  int link_K = 8;
  int link_n = 1;
  std::vector<int> link_betti;

  // [potential]
  std::string pot_kind;  // curve | plus_r | minus_r | constant
  double pot_c = 1.0;
  bool pot_c_given = false;

  // [grid]
  double r_max = 0.0;  // resolved to 10 / t when absent
  bool r_max_given = false;
  int grid_N = 2048;
  std::string grid_scheme = "graded";

  // [ih]
  int ih_nu = 1;
  std::vector<int> ih_betti;
  std::string ih_halflink;  // empty | full | points | custom
  int ih_points_m = 0;
  std::vector<int> ih_lminus_betti, ih_ranks;

  // [morse]
  std::vector<int> morse_counts, morse_betti;
  std::string morse_artifact;

  // [global]
  std::string g_preset = "spindle_min";
  int g_m = 2;
  double g_t = 12.0;
  int g_N = 1024;
  int g_K = 8;
  std::vector<double> g_t_list = {8.0, 16.0, 32.0, 64.0};
  double g_t0 = 8.0;

  // [output]  (relative paths get the CONESPEC_OUTPUT_DIR prefix, if set)
  std::string out_report, out_csv;

  // [tolerance]
  bool tol_link_given = false;   // explicit link override beats the model's own
  double tol_kernel = 1e-6;      // kernel eigenvalue bound, units of t^2
  double tol_gap = 1e-2;         // first non-kernel bound, units of t^2
  double tol_link = 1e-10;       // link diagnostic bound
  double tol_slope_min = 1.9;    // model-gap fitted exponent window
  double tol_slope_max = 2.1;
  double tol_global_slope = 0.9;  // global-demo scan slope lower bound
  double tol_small = 1e-6;        // global small-eigenvalue magnitude bound

  std::vector<std::pair<std::string, std::string>> resolved;
};

// Parses the `[section]` / `key = value` / `#`-comment grammar, validates
// against `command` (or [run] command when empty), resolves all defaults.
// Throws ConfigError carrying every error found, each with its line number.
RunConfig parse_config(const std::string& text, const std::string& command = "");

RunConfig load_config_file(const std::string& path, const std::string& command = "");

const std::vector<std::string>& known_commands();

}  // namespace conespec
