#include "conespec/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "conespec/errors.hpp"

namespace conespec {

namespace {

const std::vector<std::string> kCommands = {
    "link-validate", "model-spectrum", "model-gap",  "model-kernel",
    "ih",            "morse-check",    "global-demo"};

const std::map<std::string, std::vector<std::string>> kSchema = {
    {"run", {"command", "t", "t_list", "J"}},
    {"link", {"kind", "m", "K", "n", "betti"}},
    {"potential", {"kind", "c"}},
    {"grid", {"r_max", "N", "scheme"}},
    {"ih", {"nu", "betti", "halflink", "points_m", "lminus_betti", "ranks"}},
    {"morse", {"counts", "betti", "artifact"}},
    {"global", {"preset", "m", "t", "N", "K_fourier", "t_list", "t0"}},
    {"output", {"report", "csv"}},
    {"tolerance",
     {"kernel", "gap", "link", "slope_min", "slope_max", "global_slope_min", "small"}},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (const auto& it : items) {
    if (!out.empty()) out += sep;
    out += it;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Parser {
  std::map<std::string, std::map<std::string, RawEntry>> raw;
  std::vector<std::string> errors;
  std::vector<int> error_lines;

  void fail(int line, const std::string& msg) {
    errors.push_back(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
    error_lines.push_back(line);
  }

  // per-line errors in file order, then the section-level ones (line 0)
  void sort_errors() {
    std::vector<size_t> idx(errors.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      int la = error_lines[a] > 0 ? error_lines[a] : std::numeric_limits<int>::max();
      int lb = error_lines[b] > 0 ? error_lines[b] : std::numeric_limits<int>::max();
      return la < lb;
    });
    std::vector<std::string> out;
    out.reserve(errors.size());
    for (size_t i : idx) out.push_back(std::move(errors[i]));
    errors = std::move(out);
  }

  bool has(const std::string& sec) const { return raw.count(sec) != 0; }

  RawEntry* find(const std::string& sec, const std::string& key) {
    auto s = raw.find(sec);
    if (s == raw.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  }

  std::optional<long long> get_int(const std::string& sec, const std::string& key) {
    RawEntry* e = find(sec, key);
    if (!e) return std::nullopt;
    long long v = 0;
    const char* b = e->value.c_str();
    auto res = std::from_chars(b, b + e->value.size(), v);
    if (res.ec != std::errc() || res.ptr != b + e->value.size()) {
      fail(e->line, "value '" + e->value + "' for " + key + " is not an integer");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> get_double(const std::string& sec, const std::string& key) {
    RawEntry* e = find(sec, key);
    if (!e) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(e->value.c_str(), &end);
    if (end != e->value.c_str() + e->value.size() || e->value.empty()) {
      fail(e->line, "value '" + e->value + "' for " + key + " is not a number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> get_string(const std::string& sec, const std::string& key,
                                        const std::vector<std::string>& allowed = {}) {
    RawEntry* e = find(sec, key);
    if (!e) return std::nullopt;
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), e->value) == allowed.end()) {
      fail(e->line, key + " must be one of: " + join(allowed, ", ") + " (got '" + e->value + "')");
      return std::nullopt;
    }
    return e->value;
  }

  template <typename T, typename F>
  std::optional<std::vector<T>> get_list(const std::string& sec, const std::string& key,
                                         F parse_one, const char* kind) {
    RawEntry* e = find(sec, key);
    if (!e) return std::nullopt;
    std::vector<T> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      std::optional<T> v = parse_one(item);
      if (!v) {
        fail(e->line, "value '" + e->value + "' for " + key + " is not a comma-separated " +
                          kind + " list");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    if (out.empty()) {
      fail(e->line, key + " list is empty");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::vector<int>> get_int_list(const std::string& sec, const std::string& key) {
    return get_list<int>(
        sec, key,
        [](const std::string& s) -> std::optional<int> {
          int v = 0;
          auto res = std::from_chars(s.c_str(), s.c_str() + s.size(), v);
          if (res.ec != std::errc() || res.ptr != s.c_str() + s.size()) return std::nullopt;
          return v;
        },
        "integer");
  }

  std::optional<std::vector<double>> get_double_list(const std::string& sec,
                                                     const std::string& key) {
    return get_list<double>(
        sec, key,
        [](const std::string& s) -> std::optional<double> {
          if (s.empty()) return std::nullopt;
          char* end = nullptr;
          const double v = std::strtod(s.c_str(), &end);
          if (end != s.c_str() + s.size()) return std::nullopt;
          return v;
        },
        "number");
  }

  int line_of(const std::string& sec, const std::string& key) const {
    auto s = raw.find(sec);
    if (s == raw.end()) return 0;
    auto k = s->second.find(key);
    return k == s->second.end() ? 0 : k->second.line;
  }

  void report_unknown_keys() {
    for (const auto& [sec, entries] : raw)
      for (const auto& [key, entry] : entries)
        if (!entry.used)
          fail(entry.line, "unknown key '" + key + "' in [" + sec +
                               "] (valid keys: " + join(kSchema.at(sec), ", ") + ")");
  }
};

Parser tokenize(const std::string& text) {
  Parser p;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  std::vector<std::string> section_names;
  for (const auto& [name, keys] : kSchema) section_names.push_back(name);
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        p.fail(lineno, "malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (kSchema.count(section) == 0) {
        p.fail(lineno, "unknown section [" + section +
                           "] (valid sections: " + join(section_names, ", ") + ")");
        section.clear();
        continue;
      }
      p.raw[section];  // a present-but-empty section still counts as present
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.fail(lineno, "expected 'key = value', got '" + line + "'");
      continue;
    }
    if (section.empty()) {
      p.fail(lineno, "key outside any [section]");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      p.fail(lineno, "empty key");
      continue;
    }
    if (p.raw[section].count(key)) {
      p.fail(lineno, "duplicate key '" + key + "' in [" + section + "]");
      continue;
    }
    p.raw[section][key] = {value, lineno, false};
  }
  return p;
}

bool is_geometric(const std::vector<double>& ts) {
  if (ts.size() < 2) return false;
  const double ratio = ts[1] / ts[0];
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (std::abs(ts[i + 1] / ts[i] - ratio) > 1e-9 * std::abs(ratio)) return false;
  return true;
}

std::string output_dir_prefix() {
  const char* dir = std::getenv("CONESPEC_OUTPUT_DIR");
  if (!dir || !*dir) return "";
  std::string d = dir;
  if (!d.empty() && d.back() != '/') d += '/';
  return d;
}

std::string apply_output_dir(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  return output_dir_prefix() + path;
}

}  // namespace

const std::vector<std::string>& known_commands() { return kCommands; }

RunConfig parse_config(const std::string& text, const std::string& command) {
  Parser p = tokenize(text);
  RunConfig cfg;

  // ---- [run] ----------------------------------------------------------
  if (auto v = p.get_string("run", "command", kCommands)) cfg.command = *v;
  if (!command.empty()) {
    if (!cfg.command.empty() && cfg.command != command)
      p.fail(p.line_of("run", "command"), "config command '" + cfg.command +
                                              "' does not match the invoked command '" + command +
                                              "'");
    cfg.command = command;
  }
  if (cfg.command.empty())
    p.fail(0, "no command: pass a subcommand or set command = ... in [run]");
  if (auto v = p.get_double("run", "t")) {
    cfg.t = *v;
    cfg.t_given = true;
    if (!(*v > 0)) p.fail(p.line_of("run", "t"), "t must be positive");
  }
  if (auto v = p.get_double_list("run", "t_list")) {
    cfg.t_list = *v;
    const int line = p.line_of("run", "t_list");
    for (double t : cfg.t_list)
      if (!(t > 0)) {
        p.fail(line, "t must be positive (t_list entry " + fmt_double(t) + ")");
        break;
      }
    if (cfg.t_list.size() < 2)
      p.fail(line, "t_list needs at least 2 entries");
    else if (!is_geometric(cfg.t_list))
      p.fail(line, "t_list must be a geometric progression");
  }
  if (auto v = p.get_int("run", "J")) {
    cfg.J = static_cast<int>(*v);
    if (cfg.J < 1) p.fail(p.line_of("run", "J"), "J must be >= 1");
  }

  // ---- [link] ---------------------------------------------------------
  const bool needs_link = cfg.command == "link-validate" || cfg.command == "model-spectrum" ||
                          cfg.command == "model-gap" || cfg.command == "model-kernel";
  if (needs_link && !p.has("link")) p.fail(0, "[link] section required for " + cfg.command);
  if (p.has("link")) {
    if (auto v = p.get_string("link", "kind", {"circle", "abstract"})) cfg.link_kind = *v;
    if (needs_link && cfg.link_kind.empty() && !p.find("link", "kind"))
      p.fail(0, "[link] kind is required (circle | abstract)");
    if (auto v = p.get_int("link", "m")) {
      cfg.link_m = static_cast<int>(*v);
      if (cfg.link_m < 1) p.fail(p.line_of("link", "m"), "link m must be >= 1");
    }
    if (auto v = p.get_int("link", "K")) {
      cfg.link_K = static_cast<int>(*v);
      if (cfg.link_K < 1) p.fail(p.line_of("link", "K"), "link K must be >= 1");
    }
    if (auto v = p.get_int("link", "n")) {
      cfg.link_n = static_cast<int>(*v);
      if (cfg.link_n < 1 || cfg.link_n % 2 == 0)
        p.fail(p.line_of("link", "n"), "link dimension n must be odd and >= 1");
    }
    if (auto v = p.get_int_list("link", "betti")) {
      cfg.link_betti = *v;
      for (int b : cfg.link_betti)
        if (b < 0) p.fail(p.line_of("link", "betti"), "betti numbers must be >= 0");
    }
    if (cfg.link_kind == "circle" && cfg.link_m == 0)
      p.fail(0, "[link] m is required for circle links");
    if (cfg.link_kind == "abstract") {
      if (cfg.link_betti.empty())
        p.fail(0, "[link] betti is required for abstract links");
      else if (static_cast<int>(cfg.link_betti.size()) != cfg.link_n + 1)
        p.fail(p.line_of("link", "betti"),
               "betti list must have n + 1 = " + std::to_string(cfg.link_n + 1) + " entries");
    }
  }

  // ---- [potential] ----------------------------------------------------
  const bool needs_pot = cfg.command == "model-spectrum" || cfg.command == "model-gap" ||
                         cfg.command == "model-kernel";
  if (needs_pot && !p.has("potential"))
    p.fail(0, "[potential] section required for " + cfg.command);
  if (p.has("potential")) {
    if (auto v = p.get_string("potential", "kind", {"curve", "plus_r", "minus_r", "constant"}))
      cfg.pot_kind = *v;
    if (needs_pot && cfg.pot_kind.empty() && !p.find("potential", "kind"))
      p.fail(0, "[potential] kind is required (curve | plus_r | minus_r | constant)");
    if (auto v = p.get_double("potential", "c")) {
      cfg.pot_c = *v;
      cfg.pot_c_given = true;
      if (*v == 0.0) p.fail(p.line_of("potential", "c"), "constant potential c must be nonzero");
    }
    if (cfg.pot_kind == "curve" && cfg.link_kind == "abstract")
      p.fail(0, "curve potential requires a circle link");
    if (cfg.pot_kind == "constant" && !cfg.pot_c_given)
      p.fail(0, "[potential] c is required for constant potentials");
    if (cfg.pot_kind == "plus_r") cfg.pot_c = 1.0;
    if (cfg.pot_kind == "minus_r") cfg.pot_c = -1.0;
  }

  // ---- [grid] ---------------------------------------------------------
  if (auto v = p.get_double("grid", "r_max")) {
    cfg.r_max = *v;
    cfg.r_max_given = true;
    if (!(*v > 0)) p.fail(p.line_of("grid", "r_max"), "r_max must be positive");
  }
  if (auto v = p.get_int("grid", "N")) {
    cfg.grid_N = static_cast<int>(*v);
    if (cfg.grid_N < 16) p.fail(p.line_of("grid", "N"), "grid N must be >= 16");
  }
  if (auto v = p.get_string("grid", "scheme", {"graded", "uniform"})) cfg.grid_scheme = *v;
  if (!cfg.r_max_given && cfg.t_given) cfg.r_max = 10.0 / cfg.t;

  // ---- [ih] -----------------------------------------------------------
  if (cfg.command == "ih" && !p.has("ih")) p.fail(0, "[ih] section required for ih");
  if (p.has("ih")) {
    if (auto v = p.get_int("ih", "nu")) {
      cfg.ih_nu = static_cast<int>(*v);
      if (cfg.ih_nu < 1) p.fail(p.line_of("ih", "nu"), "nu must be >= 1");
    }
    if (auto v = p.get_int_list("ih", "betti")) {
      cfg.ih_betti = *v;
      for (int b : cfg.ih_betti)
        if (b < 0) p.fail(p.line_of("ih", "betti"), "betti numbers must be >= 0");
      if (static_cast<int>(cfg.ih_betti.size()) != 2 * cfg.ih_nu)
        p.fail(p.line_of("ih", "betti"),
               "betti list must have 2 nu = " + std::to_string(2 * cfg.ih_nu) + " entries");
    } else if (cfg.command == "ih" && !p.find("ih", "betti")) {
      p.fail(0, "[ih] betti is required");
    }
    if (auto v = p.get_string("ih", "halflink", {"empty", "full", "points", "custom"}))
      cfg.ih_halflink = *v;
    else if (cfg.command == "ih" && !p.find("ih", "halflink"))
      p.fail(0, "[ih] halflink is required (empty | full | points | custom)");
    if (auto v = p.get_int("ih", "points_m")) {
      cfg.ih_points_m = static_cast<int>(*v);
      if (cfg.ih_points_m < 1) p.fail(p.line_of("ih", "points_m"), "points_m must be >= 1");
    }
    if (auto v = p.get_int_list("ih", "lminus_betti")) cfg.ih_lminus_betti = *v;
    if (auto v = p.get_int_list("ih", "ranks")) cfg.ih_ranks = *v;
    if (cfg.ih_halflink == "points" && cfg.ih_points_m == 0)
      p.fail(0, "[ih] points_m is required for halflink = points");
    if (cfg.ih_halflink == "custom" && (cfg.ih_lminus_betti.empty() || cfg.ih_ranks.empty()))
      p.fail(0, "[ih] lminus_betti and ranks are required for halflink = custom");
  }

  // ---- [morse] --------------------------------------------------------
  if (cfg.command == "morse-check" && !p.has("morse"))
    p.fail(0, "[morse] section required for morse-check");
  if (p.has("morse")) {
    if (auto v = p.get_int_list("morse", "counts")) cfg.morse_counts = *v;
    if (auto v = p.get_int_list("morse", "betti")) cfg.morse_betti = *v;
    if (auto v = p.get_string("morse", "artifact")) cfg.morse_artifact = *v;
    const bool have_tables = !cfg.morse_counts.empty() || !cfg.morse_betti.empty();
    if (have_tables && !cfg.morse_artifact.empty())
      p.fail(0, "[morse] give either counts/betti or artifact, not both");
    if (cfg.command == "morse-check" && !have_tables && cfg.morse_artifact.empty())
      p.fail(0, "[morse] needs counts and betti (or artifact = <global-demo report>)");
    if (have_tables) {
      if (cfg.morse_counts.empty()) p.fail(0, "[morse] counts is required with betti");
      if (cfg.morse_betti.empty()) p.fail(0, "[morse] betti is required with counts");
      if (!cfg.morse_counts.empty() && !cfg.morse_betti.empty() &&
          cfg.morse_counts.size() != cfg.morse_betti.size())
        p.fail(p.line_of("morse", "betti"), "counts and betti must have equal length");
      for (int c : cfg.morse_counts)
        if (c < 0) p.fail(p.line_of("morse", "counts"), "counts must be >= 0");
      for (int b : cfg.morse_betti)
        if (b < 0) p.fail(p.line_of("morse", "betti"), "betti numbers must be >= 0");
    }
  }

  // ---- [global] -------------------------------------------------------
  if (p.has("global")) {
    if (auto v = p.get_string("global", "preset", {"spindle_min", "spindle_max", "suspension"}))
      cfg.g_preset = *v;
    if (auto v = p.get_int("global", "m")) {
      cfg.g_m = static_cast<int>(*v);
      if (cfg.g_m < 1) p.fail(p.line_of("global", "m"), "global m must be >= 1");
    }
    if (auto v = p.get_double("global", "t")) {
      cfg.g_t = *v;
      if (!(*v > 0)) p.fail(p.line_of("global", "t"), "t must be positive");
    }
    if (auto v = p.get_int("global", "N")) {
      cfg.g_N = static_cast<int>(*v);
      if (cfg.g_N < 16) p.fail(p.line_of("global", "N"), "global N must be >= 16");
    }
    if (auto v = p.get_int("global", "K_fourier")) {
      cfg.g_K = static_cast<int>(*v);
      if (cfg.g_K < 1) p.fail(p.line_of("global", "K_fourier"), "K_fourier must be >= 1");
    }
    if (auto v = p.get_double("global", "t0")) {
      cfg.g_t0 = *v;
      if (!(*v > 0)) p.fail(p.line_of("global", "t0"), "t0 must be positive");
    }
    if (auto v = p.get_double_list("global", "t_list")) {
      cfg.g_t_list = *v;
      const int line = p.line_of("global", "t_list");
      if (cfg.g_t_list.size() < 4)
        p.fail(line, "global t_list needs at least 4 entries");
      else if (!is_geometric(cfg.g_t_list))
        p.fail(line, "global t_list must be a geometric progression");
      for (double t : cfg.g_t_list)
        if (t < cfg.g_t0) {
          p.fail(line, "every t_list entry must be >= t0 = " + fmt_double(cfg.g_t0));
          break;
        }
    }
    if (cfg.g_t < cfg.g_t0)
      p.fail(p.line_of("global", "t"),
             "global t must be >= t0 = " + fmt_double(cfg.g_t0) + " (the scan threshold)");
  }

  // ---- [output] -------------------------------------------------------
  if (auto v = p.get_string("output", "report")) cfg.out_report = *v;
  if (auto v = p.get_string("output", "csv")) cfg.out_csv = *v;
  if (cfg.out_report.empty()) cfg.out_report = cfg.command + ".report.txt";
  if (cfg.out_csv.empty()) cfg.out_csv = cfg.command + ".csv";
  cfg.out_report = apply_output_dir(cfg.out_report);
  cfg.out_csv = apply_output_dir(cfg.out_csv);

  // ---- [tolerance] ----------------------------------------------------
  struct TolKey {
    const char* key;
    double* slot;
  };
  for (TolKey tk : {TolKey{"kernel", &cfg.tol_kernel}, TolKey{"gap", &cfg.tol_gap},
                    TolKey{"link", &cfg.tol_link}, TolKey{"slope_min", &cfg.tol_slope_min},
                    TolKey{"slope_max", &cfg.tol_slope_max},
                    TolKey{"global_slope_min", &cfg.tol_global_slope},
                    TolKey{"small", &cfg.tol_small}}) {
    if (auto v = p.get_double("tolerance", tk.key)) {
      *tk.slot = *v;
      if (!(*v > 0)) p.fail(p.line_of("tolerance", tk.key),
                            std::string(tk.key) + " tolerance must be positive");
      if (tk.slot == &cfg.tol_link) cfg.tol_link_given = true;
    }
  }
  if (cfg.tol_slope_min >= cfg.tol_slope_max)
    p.fail(0, "slope_min must be below slope_max");

  // command-specific requirements on [run]
  if ((cfg.command == "model-spectrum" || cfg.command == "model-kernel") && !cfg.t_given)
    p.fail(0, "[run] t is required for " + cfg.command);
  if (cfg.command == "model-gap" && cfg.t_list.empty())
    p.fail(0, "[run] t_list is required for model-gap");

  p.report_unknown_keys();
  if (!p.errors.empty()) {
    p.sort_errors();
    throw ConfigError(p.errors);
  }

  // ---- resolved key/value embedding ------------------------------------
  auto push = [&cfg](const std::string& sec, const std::string& key, const std::string& val) {
    cfg.resolved.emplace_back(sec + "." + key, val);
  };
  push("run", "command", cfg.command);
  if (cfg.t_given) push("run", "t", fmt_double(cfg.t));
  if (!cfg.t_list.empty()) {
    std::vector<std::string> items;
    for (double t : cfg.t_list) items.push_back(fmt_double(t));
    push("run", "t_list", join(items, ","));
  }
  push("run", "J", std::to_string(cfg.J));
  if (!cfg.link_kind.empty()) {
    push("link", "kind", cfg.link_kind);
    if (cfg.link_kind == "circle") {
      push("link", "m", std::to_string(cfg.link_m));
      push("link", "K", std::to_string(cfg.link_K));
    } else {
      push("link", "n", std::to_string(cfg.link_n));
      std::vector<std::string> items;
      for (int b : cfg.link_betti) items.push_back(std::to_string(b));
      push("link", "betti", join(items, ","));
    }
  }
  if (!cfg.pot_kind.empty()) {
    push("potential", "kind", cfg.pot_kind);
    if (cfg.pot_kind == "constant" || cfg.pot_kind == "plus_r" || cfg.pot_kind == "minus_r")
      push("potential", "c", fmt_double(cfg.pot_c));
  }
  if (needs_pot || p.has("grid")) {
    if (cfg.r_max_given || cfg.t_given)
      push("grid", "r_max", fmt_double(cfg.r_max));
    else if (!cfg.t_list.empty())
      push("grid", "r_max", "10/t");
    push("grid", "N", std::to_string(cfg.grid_N));
    push("grid", "scheme", cfg.grid_scheme);
  }
  if (p.has("ih")) {
    push("ih", "nu", std::to_string(cfg.ih_nu));
    std::vector<std::string> items;
    for (int b : cfg.ih_betti) items.push_back(std::to_string(b));
    push("ih", "betti", join(items, ","));
    push("ih", "halflink", cfg.ih_halflink);
    if (cfg.ih_halflink == "points") push("ih", "points_m", std::to_string(cfg.ih_points_m));
    if (cfg.ih_halflink == "custom") {
      std::vector<std::string> lb, rk;
      for (int b : cfg.ih_lminus_betti) lb.push_back(std::to_string(b));
      for (int r : cfg.ih_ranks) rk.push_back(std::to_string(r));
      push("ih", "lminus_betti", join(lb, ","));
      push("ih", "ranks", join(rk, ","));
    }
  }
  if (p.has("morse")) {
    if (!cfg.morse_artifact.empty()) {
      push("morse", "artifact", cfg.morse_artifact);
    } else {
      std::vector<std::string> cs, bs;
      for (int c : cfg.morse_counts) cs.push_back(std::to_string(c));
      for (int b : cfg.morse_betti) bs.push_back(std::to_string(b));
      push("morse", "counts", join(cs, ","));
      push("morse", "betti", join(bs, ","));
    }
  }
  if (cfg.command == "global-demo" || p.has("global")) {
    push("global", "preset", cfg.g_preset);
    push("global", "m", std::to_string(cfg.g_m));
    push("global", "t", fmt_double(cfg.g_t));
    push("global", "N", std::to_string(cfg.g_N));
    push("global", "K_fourier", std::to_string(cfg.g_K));
    std::vector<std::string> items;
    for (double t : cfg.g_t_list) items.push_back(fmt_double(t));
    push("global", "t_list", join(items, ","));
    push("global", "t0", fmt_double(cfg.g_t0));
  }
  push("output", "report", cfg.out_report);
  push("output", "csv", cfg.out_csv);
  push("tolerance", "kernel", fmt_double(cfg.tol_kernel));
  push("tolerance", "gap", fmt_double(cfg.tol_gap));
  push("tolerance", "link", fmt_double(cfg.tol_link));
  push("tolerance", "slope_min", fmt_double(cfg.tol_slope_min));
  push("tolerance", "slope_max", fmt_double(cfg.tol_slope_max));
  push("tolerance", "global_slope_min", fmt_double(cfg.tol_global_slope));
  push("tolerance", "small", fmt_double(cfg.tol_small));
  return cfg;
}

RunConfig load_config_file(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace conespec
