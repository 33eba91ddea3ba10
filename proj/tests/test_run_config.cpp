#include <algorithm>
#include <string>
#include <vector>

#include "conespec/errors.hpp"
#include "conespec/run_config.hpp"
#include "doctest.h"

using namespace conespec;

namespace {

// flatten a ConfigError for substring checks
std::string all_errors(const ConfigError& e) {
  std::string out;
  for (const auto& msg : e.errors) out += msg + "\n";
  return out;
}

bool has_resolved(const RunConfig& cfg, const std::string& key, const std::string& val) {
  return std::any_of(cfg.resolved.begin(), cfg.resolved.end(),
                     [&](const auto& kv) { return kv.first == key && kv.second == val; });
}

}  // namespace

TEST_CASE("minimal model-spectrum config resolves defaults") {
  const std::string text = R"(
[run]
t = 10

[link]
kind = circle
m = 2

[potential]
kind = curve
)";
  RunConfig cfg = parse_config(text, "model-spectrum");
  CHECK(cfg.command == "model-spectrum");
  CHECK(cfg.t == 10.0);
  CHECK(cfg.t_given);
  CHECK(cfg.J == 10);
  CHECK(cfg.link_kind == "circle");
  CHECK(cfg.link_m == 2);
  CHECK(cfg.link_K == 8);
  CHECK(cfg.pot_kind == "curve");
  CHECK(cfg.grid_N == 2048);
  CHECK(cfg.grid_scheme == "graded");
  // r_max defaults to 10 / t
  CHECK(!cfg.r_max_given);
  CHECK(cfg.r_max == doctest::Approx(1.0));
  CHECK(cfg.tol_kernel == 1e-6);
  CHECK(cfg.tol_gap == 1e-2);
  CHECK(!cfg.tol_link_given);

  CHECK(has_resolved(cfg, "run.command", "model-spectrum"));
  CHECK(has_resolved(cfg, "run.t", "10"));
  CHECK(has_resolved(cfg, "link.kind", "circle"));
  CHECK(has_resolved(cfg, "grid.r_max", "1"));
  CHECK(has_resolved(cfg, "grid.N", "2048"));
  CHECK(has_resolved(cfg, "output.report", "model-spectrum.report.txt"));
  CHECK(has_resolved(cfg, "output.csv", "model-spectrum.csv"));
  CHECK(has_resolved(cfg, "tolerance.kernel", "1e-06"));
}

TEST_CASE("negative t reports 't must be positive' with its line") {
  const std::string text =
      "[run]\n"
      "t = -1\n"
      "\n"
      "[link]\n"
      "kind = circle\n"
      "m = 2\n"
      "\n"
      "[potential]\n"
      "kind = curve\n";
  try {
    parse_config(text, "model-kernel");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors.size() == 1);
    CHECK(e.errors[0].find("t must be positive") != std::string::npos);
    CHECK(e.errors[0].find("line 2") != std::string::npos);
  }
}

TEST_CASE("unknown key lists the valid alternatives for its section") {
  const std::string text =
      "[ih]\n"
      "nu = 1\n"
      "betti = 1,1\n"
      "halflink = points\n"
      "points_m = 2\n"
      "perversity = middle\n";
  try {
    parse_config(text, "ih");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors.size() == 1);
    CHECK(e.errors[0].find("unknown key 'perversity' in [ih]") != std::string::npos);
    CHECK(e.errors[0].find("points_m") != std::string::npos);
    CHECK(e.errors[0].find("lminus_betti") != std::string::npos);
    CHECK(e.errors[0].find("line 6") != std::string::npos);
  }
}

TEST_CASE("all errors are collected in one throw, sorted by line") {
  const std::string text =
      "[run]\n"
      "t = -1\n"
      "J = 0\n"
      "\n"
      "[link]\n"
      "kind = circle\n"
      "m = abc\n"
      "\n"
      "[potential]\n"
      "kind = banana\n"
      "\n"
      "[nonsense]\n"
      "x = 1\n";
  try {
    parse_config(text, "model-kernel");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.errors.size() >= 5);
    const std::string all = all_errors(e);
    CHECK(all.find("t must be positive") != std::string::npos);
    CHECK(all.find("J must be >= 1") != std::string::npos);
    CHECK(all.find("value 'abc' for m is not an integer") != std::string::npos);
    CHECK(all.find("kind must be one of: curve, plus_r, minus_r, constant") != std::string::npos);
    CHECK(all.find("unknown section [nonsense]") != std::string::npos);
    // line-prefixed errors come in file order
    std::vector<int> lines;
    for (const auto& msg : e.errors) {
      if (msg.rfind("line ", 0) == 0) lines.push_back(std::atoi(msg.c_str() + 5));
    }
    CHECK(std::is_sorted(lines.begin(), lines.end()));
  }
}

TEST_CASE("duplicate keys are rejected") {
  const std::string text =
      "[link]\n"
      "kind = circle\n"
      "m = 2\n"
      "m = 3\n";
  try {
    parse_config(text, "link-validate");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors.size() == 1);
    CHECK(e.errors[0].find("duplicate key 'm' in [link]") != std::string::npos);
    CHECK(e.errors[0].find("line 4") != std::string::npos);
  }
}

TEST_CASE("missing required sections are reported per command") {
  try {
    parse_config("", "model-spectrum");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string all = all_errors(e);
    CHECK(all.find("[link] section required for model-spectrum") != std::string::npos);
    CHECK(all.find("[potential] section required for model-spectrum") != std::string::npos);
    CHECK(all.find("[run] t is required for model-spectrum") != std::string::npos);
  }

  try {
    parse_config("", "ih");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("[ih] section required for ih") != std::string::npos);
  }
}

TEST_CASE("t_list must be a geometric progression of at least 2") {
  const std::string head =
      "[link]\nkind = circle\nm = 2\n\n[potential]\nkind = curve\n\n[run]\n";
  try {
    parse_config(head + "t_list = 4,8,15\n", "model-gap");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("t_list must be a geometric progression") != std::string::npos);
  }
  try {
    parse_config(head + "t_list = 4\n", "model-gap");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("t_list needs at least 2 entries") != std::string::npos);
  }
  RunConfig ok = parse_config(head + "t_list = 4,8,16,32\n", "model-gap");
  CHECK(ok.t_list == std::vector<double>{4, 8, 16, 32});
}

TEST_CASE("curve potential requires a circle link") {
  const std::string text =
      "[run]\n"
      "t = 5\n"
      "\n"
      "[link]\n"
      "kind = abstract\n"
      "n = 1\n"
      "betti = 1,1\n"
      "\n"
      "[potential]\n"
      "kind = curve\n";
  try {
    parse_config(text, "model-kernel");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("curve potential requires a circle link") != std::string::npos);
  }
}

TEST_CASE("plus_r and minus_r fix the sign of the constant") {
  const std::string head =
      "[run]\nt = 5\n\n[link]\nkind = abstract\nn = 1\nbetti = 1,1\n\n[potential]\nkind = ";
  RunConfig plus = parse_config(head + "plus_r\n", "model-kernel");
  CHECK(plus.pot_c == 1.0);
  RunConfig minus = parse_config(head + "minus_r\n", "model-kernel");
  CHECK(minus.pot_c == -1.0);
}

TEST_CASE("abstract links need a betti list of length n + 1") {
  const std::string text =
      "[link]\n"
      "kind = abstract\n"
      "n = 3\n"
      "betti = 1,0,1\n";
  try {
    parse_config(text, "link-validate");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("betti list must have n + 1 = 4 entries") != std::string::npos);
  }
}

TEST_CASE("morse accepts counts/betti xor artifact") {
  try {
    parse_config("[morse]\ncounts = 1,0,1\nbetti = 1,0,1\nartifact = r.txt\n", "morse-check");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("either counts/betti or artifact, not both") != std::string::npos);
  }
  try {
    parse_config("[morse]\ncounts = 1,0,1\n", "morse-check");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("betti is required with counts") != std::string::npos);
  }
  RunConfig ok = parse_config("[morse]\ncounts = 1,0,1\nbetti = 1,0,1\n", "morse-check");
  CHECK(ok.morse_counts == std::vector<int>{1, 0, 1});
  CHECK(ok.morse_betti == std::vector<int>{1, 0, 1});
}

TEST_CASE("ih halflink variants") {
  RunConfig pts = parse_config(
      "[ih]\nnu = 1\nbetti = 1,1\nhalflink = points\npoints_m = 4\n", "ih");
  CHECK(pts.ih_halflink == "points");
  CHECK(pts.ih_points_m == 4);

  try {
    parse_config("[ih]\nnu = 1\nbetti = 1,1\nhalflink = points\n", "ih");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("points_m is required") != std::string::npos);
  }

  try {
    parse_config("[ih]\nnu = 1\nbetti = 1,1\nhalflink = custom\n", "ih");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("lminus_betti and ranks are required") != std::string::npos);
  }

  RunConfig cus = parse_config(
      "[ih]\nnu = 1\nbetti = 1,1\nhalflink = custom\nlminus_betti = 1,0\nranks = 1,0\n", "ih");
  CHECK(cus.ih_lminus_betti == std::vector<int>{1, 0});
  CHECK(cus.ih_ranks == std::vector<int>{1, 0});

  // betti must have 2 * nu entries
  try {
    parse_config("[ih]\nnu = 2\nbetti = 1,1\nhalflink = empty\n", "ih");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("2 nu = 4 entries") != std::string::npos);
  }
}

TEST_CASE("global section validation") {
  try {
    parse_config("[global]\nt_list = 8,16,32\n", "global-demo");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("t_list needs at least 4 entries") != std::string::npos);
  }
  try {
    parse_config("[global]\nt_list = 4,8,16,32\n", "global-demo");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find(">= t0 = 8") != std::string::npos);
  }
  try {
    parse_config("[global]\nt = 2\n", "global-demo");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("t must be >= t0") != std::string::npos);
  }
  // defaults only: no config at all is a valid global-demo run
  RunConfig cfg = parse_config("", "global-demo");
  CHECK(cfg.g_preset == "spindle_min");
  CHECK(cfg.g_m == 2);
  CHECK(cfg.g_t == 12.0);
  CHECK(cfg.g_N == 1024);
  CHECK(cfg.g_K == 8);
  CHECK(cfg.g_t_list == std::vector<double>{8, 16, 32, 64});
  CHECK(has_resolved(cfg, "global.preset", "spindle_min"));
  CHECK(has_resolved(cfg, "global.t_list", "8,16,32,64"));
}

TEST_CASE("command mismatch between file and invocation is an error") {
  try {
    parse_config("[run]\ncommand = ih\n", "morse-check");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("does not match the invoked command") != std::string::npos);
  }
  // matching command in the file alone is enough
  RunConfig cfg = parse_config("[run]\ncommand = global-demo\n");
  CHECK(cfg.command == "global-demo");
  // no command anywhere
  try {
    parse_config("");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("no command") != std::string::npos);
  }
}

TEST_CASE("tolerance overrides are applied and the link override is flagged") {
  const std::string text =
      "[link]\n"
      "kind = circle\n"
      "m = 2\n"
      "\n"
      "[tolerance]\n"
      "link = 1e-8\n"
      "kernel = 1e-5\n";
  RunConfig cfg = parse_config(text, "link-validate");
  CHECK(cfg.tol_link == 1e-8);
  CHECK(cfg.tol_link_given);
  CHECK(cfg.tol_kernel == 1e-5);

  try {
    parse_config("[link]\nkind = circle\nm = 2\n\n[tolerance]\nslope_min = 2.2\n",
                 "link-validate");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(all_errors(e).find("slope_min must be below slope_max") != std::string::npos);
  }
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
  const std::string text =
      "# pinned kernel check\n"
      "[run]\n"
      "  t   =  10   # deformation parameter\n"
      "\n"
      "[link]\n"
      "kind = circle\n"
      "m = 3\n"
      "\n"
      "[potential]\n"
      "kind = curve\n";
  RunConfig cfg = parse_config(text, "model-kernel");
  CHECK(cfg.t == 10.0);
  CHECK(cfg.link_m == 3);
}

TEST_CASE("malformed values name the key and the offending text") {
  const std::string text =
      "[run]\n"
      "t = fast\n"
      "\n"
      "[link]\n"
      "kind = circle\n"
      "m = 2\n"
      "K = 3.5\n"
      "\n"
      "[potential]\n"
      "kind = curve\n";
  try {
    parse_config(text, "model-kernel");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string all = all_errors(e);
    CHECK(all.find("value 'fast' for t is not a number") != std::string::npos);
    CHECK(all.find("value '3.5' for K is not an integer") != std::string::npos);
  }
}

TEST_CASE("output paths can be overridden and keep defaults otherwise") {
  const std::string text =
      "[morse]\n"
      "counts = 1,0,1\n"
      "betti = 1,0,1\n"
      "\n"
      "[output]\n"
      "report = out/mc.txt\n";
  RunConfig cfg = parse_config(text, "morse-check");
  CHECK(cfg.out_report == "out/mc.txt");
  CHECK(cfg.out_csv == "morse-check.csv");
}
