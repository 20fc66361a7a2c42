#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"

namespace fs = std::filesystem;
using dirac::cli::RunConfig;

namespace {

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream f(p);
  f << body;
  return p;
}

int run(const std::string& args, const std::string& capture = "") {
  std::string cmd = std::string(DIRAC_SPECTRA_BIN) + " " + args;
  if (!capture.empty())
    cmd += " > " + capture + " 2>/dev/null";
  else
    cmd += " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parses sections, dotted keys and comments") {
  const fs::path p = write_temp("cfg_ok.ini",
                                "# leading comment\n"
                                "dimension = 3\n"
                                "[potential]\n"
                                "family = coulomb ; inline comment\n"
                                "nu = -0.5\n"
                                "radial.n = 2048\n"
                                "[radial]\n"
                                "r_max = 150\n");
  const RunConfig cfg = RunConfig::from_file(p.string());
  CHECK(cfg.get_int("dimension", 0) == 3);
  CHECK(cfg.get("potential.family", "") == "coulomb");
  CHECK(cfg.get_num("potential.nu", 0) == doctest::Approx(-0.5));
  CHECK(cfg.get_int("radial.n", 0) == 2048);  // dotted key inside a section
  CHECK(cfg.get_num("radial.r_max", 0) == doctest::Approx(150));
  CHECK(cfg.get("missing.key", "fallback") == "fallback");
}

TEST_CASE("config diagnostics carry line numbers and key names") {
  const fs::path bad = write_temp("cfg_bad.ini", "ok = 1\nnot a key value pair\n");
  try {
    RunConfig::from_file(bad.string());
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  const fs::path nonnum = write_temp("cfg_nonnum.ini", "mass = heavy\n");
  const RunConfig cfg = RunConfig::from_file(nonnum.string());
  try {
    cfg.get_num("mass", 0.0);
    FAIL("expected type error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("mass") != std::string::npos);
  }
  CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/file.ini"), std::runtime_error);
}

TEST_CASE("exit codes encode verdicts") {
  // holds -> 0
  const fs::path holds = write_temp("cli_holds.ini",
                                    "mass = 0\ntheorem = massless-electric\n"
                                    "[potential]\nfamily = electric\nc = -0.1\nsigma = 1\n");
  CHECK(run("check --config " + holds.string()) == 0);

  // fails -> 1
  const fs::path fails = write_temp("cli_fails.ini",
                                    "mass = 0\ntheorem = massless-electric\n"
                                    "[potential]\nfamily = electric\nc = -2\nsigma = 1\n");
  CHECK(run("check --config " + fails.string()) == 1);

  // grid-estimated custom potential -> not certifiable -> 2
  // (log-normal bump: smooth decay to zero at both table ends)
  std::ostringstream table;
  table.precision(12);
  for (double r = 1e-6; r < 1e6; r *= 1.01) {
    const double lr = std::log(r);
    table << r << "," << 0.01 * std::exp(-0.5 * lr * lr) / r << "\n";
  }
  const fs::path data = write_temp("cli_custom.csv", table.str());
  const fs::path nc = write_temp("cli_nc.ini",
                                 "mass = 0\ntheorem = general\n"
                                 "[potential]\nfamily = custom\nfile = " + data.string() + "\n");
  CHECK(run("check --config " + nc.string()) == 2);

  // malformed config -> > 2
  const fs::path bad = write_temp("cli_bad.ini", "mass : 1\n");
  CHECK(run("check --config " + bad.string()) > 2);
}

TEST_CASE("threshold subcommand reproduces the closed-form value") {
  const fs::path out = fs::temp_directory_path() / "cli_thr.txt";
  CHECK(run("threshold --theorem massless-electric --family coulomb-electric",
            out.string()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("0.207106781") != std::string::npos);
}

TEST_CASE("json reports are byte-identical across reruns and thread counts") {
  const fs::path cfg = write_temp("cli_sweep.ini",
                                  "mass = 1\n[potential]\nfamily = coulomb\nnu = -0.5\n"
                                  "[radial]\nn = 512\nr_max = 100\n[sweep]\nkappas = -1,1\n");
  const fs::path o1 = fs::temp_directory_path() / "cli_sw1.json";
  const fs::path o2 = fs::temp_directory_path() / "cli_sw2.json";
  CHECK(run("sweep --config " + cfg.string(), o1.string()) == 0);
  setenv("DIRAC_SPECTRA_THREADS", "4", 1);
  CHECK(run("sweep --config " + cfg.string(), o2.string()) == 0);
  unsetenv("DIRAC_SPECTRA_THREADS");
  CHECK(slurp(o1) == slurp(o2));
  CHECK_FALSE(slurp(o1).empty());
}

TEST_CASE("spectrum subcommand reports the massless note verbatim") {
  const fs::path cfg = write_temp("cli_massless.ini",
                                  "mass = 0\n[potential]\nfamily = coulomb\nnu = 0.1\n"
                                  "[radial]\nn = 512\nr_max = 100\n");
  const fs::path out = fs::temp_directory_path() / "cli_massless.json";
  CHECK(run("spectrum --config " + cfg.string() + " --kappa -1", out.string()) == 0);
  CHECK(slurp(out).find("no persistent eigenvalue found") != std::string::npos);
}

}  // TEST_SUITE
