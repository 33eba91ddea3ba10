#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

// End-to-end tests that drive the installed binary. The path is baked in at
// configure time and can be overridden with CONESPEC_CLI_PATH.

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  if (const char* env = std::getenv("CONESPEC_CLI_PATH")) return env;
#ifdef CONESPEC_CLI_PATH_DEFAULT
  return CONESPEC_CLI_PATH_DEFAULT;
#else
  return "./conespec";
#endif
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("conespec_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name, const std::string& content) const {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
  }
};

struct RunResult {
  int exit_code = -1;
  std::string stdout_text, stderr_text;
};

RunResult run_cli(const TempDir& td, const std::string& args) {
  const fs::path out = td.dir / "stdout.txt";
  const fs::path err = td.dir / "stderr.txt";
  std::ostringstream cmd;
  cmd << "CONESPEC_OUTPUT_DIR=" << td.dir << " " << cli_path() << " " << args << " > " << out
      << " 2> " << err;
  const int status = std::system(cmd.str().c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  r.stdout_text = slurp(out);
  r.stderr_text = slurp(err);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: model-kernel matches the pinned example") {
  TempDir td;
  const fs::path cfg = td.file("k.ini",
                               "[run]\n"
                               "t = 10\n"
                               "\n"
                               "[link]\n"
                               "kind = circle\n"
                               "m = 3\n"
                               "K = 6\n"
                               "\n"
                               "[potential]\n"
                               "kind = curve\n"
                               "\n"
                               "[grid]\n"
                               "N = 512\n");
  RunResult r = run_cli(td, "model-kernel --config " + cfg.string());
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("PASS") != std::string::npos);

  const std::string report = slurp(td.dir / "model-kernel.report.txt");
  CHECK(report.find("verdict: PASS") != std::string::npos);
  CHECK(report.find("kernel dims by degree = 0,2,0") != std::string::npos);
  // the resolved configuration is embedded in full
  CHECK(report.find("[resolved configuration]") != std::string::npos);
  CHECK(report.find("run.t = 10") != std::string::npos);
  CHECK(report.find("link.m = 3") != std::string::npos);
  CHECK(report.find("tolerance.kernel = 1e-06") != std::string::npos);

  const std::string csv = slurp(td.dir / "model-kernel.csv");
  CHECK(csv.rfind("degree,t,index,eigenvalue,residual\n", 0) == 0);
  CHECK(csv.find("\n1,10,") != std::string::npos);
}

TEST_CASE("cli: ih reports middle-perversity numbers") {
  TempDir td;
  const fs::path cfg = td.file("ih.ini",
                               "[ih]\n"
                               "nu = 1\n"
                               "betti = 1,1\n"
                               "halflink = points\n"
                               "points_m = 4\n");
  RunResult r = run_cli(td, "ih --config " + cfg.string());
  CHECK(r.exit_code == 0);
  const std::string report = slurp(td.dir / "ih.report.txt");
  CHECK(report.find("m_p = (0,3,0)") != std::string::npos);
  CHECK(report.find("contribution = 0,3,0") != std::string::npos);
}

TEST_CASE("cli: morse-check fails with exit 1 when the inequalities fail") {
  TempDir td;
  const fs::path cfg = td.file("mc.ini",
                               "[morse]\n"
                               "counts = 0,0,1\n"
                               "betti = 1,0,1\n");
  RunResult r = run_cli(td, "morse-check --config " + cfg.string());
  CHECK(r.exit_code == 1);
  CHECK(r.stdout_text.find("FAIL") != std::string::npos);
  const std::string report = slurp(td.dir / "morse-check.report.txt");
  CHECK(report.find("verdict: FAIL") != std::string::npos);
  CHECK(report.find("k = 0") != std::string::npos);
}

TEST_CASE("cli: config errors exit 2 and list every problem") {
  TempDir td;
  const fs::path cfg = td.file("bad.ini",
                               "[run]\n"
                               "t = -1\n"
                               "\n"
                               "[ih]\n"
                               "nu = 1\n"
                               "betti = 1,1\n"
                               "halflink = points\n"
                               "points_m = 2\n"
                               "perversity = middle\n");
  RunResult r = run_cli(td, "ih --config " + cfg.string());
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("t must be positive") != std::string::npos);
  CHECK(r.stderr_text.find("unknown key 'perversity'") != std::string::npos);
  // no artifacts on config failure
  CHECK(!fs::exists(td.dir / "ih.report.txt"));
}

TEST_CASE("cli: missing config file exits 2") {
  TempDir td;
  RunResult r = run_cli(td, "ih --config " + (td.dir / "nope.ini").string());
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("cannot read config file") != std::string::npos);
}

TEST_CASE("cli: unknown subcommand exits 2") {
  TempDir td;
  RunResult r = run_cli(td, "frobnicate");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: repeated runs produce bit-identical CSV output") {
  TempDir td;
  const fs::path cfg = td.file("k.ini",
                               "[run]\n"
                               "t = 6\n"
                               "\n"
                               "[link]\n"
                               "kind = circle\n"
                               "m = 2\n"
                               "K = 4\n"
                               "\n"
                               "[potential]\n"
                               "kind = curve\n"
                               "\n"
                               "[grid]\n"
                               "N = 256\n");
  RunResult r1 = run_cli(td, "model-kernel --config " + cfg.string());
  REQUIRE(r1.exit_code == 0);
  const std::string csv1 = slurp(td.dir / "model-kernel.csv");
  RunResult r2 = run_cli(td, "model-kernel --config " + cfg.string());
  REQUIRE(r2.exit_code == 0);
  const std::string csv2 = slurp(td.dir / "model-kernel.csv");
  CHECK(csv1 == csv2);
  CHECK(!csv1.empty());
}

TEST_CASE("cli: global-demo runs from flags alone and feeds morse-check") {
  TempDir td;
  // keep N and K small; the flags override the defaults
  const fs::path gcfg = td.file("gd.ini",
                                "[global]\n"
                                "preset = spindle_min\n"
                                "m = 2\n"
                                "t = 12\n"
                                "N = 256\n"
                                "K_fourier = 2\n");
  RunResult r = run_cli(td, "global-demo --config " + gcfg.string());
  REQUIRE(r.exit_code == 0);
  const std::string report = slurp(td.dir / "global-demo.report.txt");
  CHECK(report.find("counts = 1,0,1") != std::string::npos);
  CHECK(report.find("betti = 1,0,1") != std::string::npos);
  CHECK(report.find("verdict: PASS") != std::string::npos);

  // artifact flow: hand the report to morse-check
  const fs::path mcfg = td.file("mc.ini",
                                "[morse]\n"
                                "artifact = " + (td.dir / "global-demo.report.txt").string() +
                                    "\n");
  RunResult r2 = run_cli(td, "morse-check --config " + mcfg.string());
  CHECK(r2.exit_code == 0);
  const std::string mreport = slurp(td.dir / "morse-check.report.txt");
  CHECK(mreport.find("verdict: PASS") != std::string::npos);
  CHECK(mreport.find("euler") != std::string::npos);
}

TEST_CASE("cli: global-demo flag overrides are validated") {
  TempDir td;
  RunResult bad = run_cli(td, "global-demo --preset moebius --m 2 --t 12");
  CHECK(bad.exit_code == 2);
  CHECK(bad.stderr_text.find("unknown preset 'moebius'") != std::string::npos);

  RunResult low = run_cli(td, "global-demo --t 2");
  CHECK(low.exit_code == 2);
  CHECK(low.stderr_text.find("t must be >= t0") != std::string::npos);
}

TEST_CASE("cli: link-validate uses the model's declared tolerance") {
  TempDir td;
  const fs::path cfg = td.file("lv.ini",
                               "[link]\n"
                               "kind = circle\n"
                               "m = 3\n"
                               "K = 6\n");
  RunResult r = run_cli(td, "link-validate --config " + cfg.string());
  CHECK(r.exit_code == 0);
  const std::string report = slurp(td.dir / "link-validate.report.txt");
  CHECK(report.find("verdict: PASS") != std::string::npos);
  CHECK(report.find("tolerance") != std::string::npos);
}
