#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shl/config.hpp"
#include "shl/errors.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_bin() {
  const char* p = std::getenv("SHL_BIN");
  REQUIRE_MESSAGE(p != nullptr, "SHL_BIN must point at the CLI binary");
  return p;
}

int run_cli(const std::string& args, const std::string& dir,
            std::string* err_out = nullptr) {
  fs::create_directories(dir);
  const std::string errfile = dir + "/stderr.txt";
  const std::string cmd = cli_bin() + " " + args + " >" + dir + "/stdout.txt 2>" + errfile;
  const int rc = std::system(cmd.c_str());
  if (err_out) {
    std::ifstream in(errfile);
    std::stringstream ss;
    ss << in.rdbuf();
    *err_out = ss.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> parse_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), path);
  std::string line;
  std::getline(in, line); // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string kTmp = "/tmp/shl_cli_tests";

} // namespace

TEST_CASE("eigen subcommand reproduces the Laplacian ground state") {
  const std::string dir = kTmp + "/eigen";
  REQUIRE(run_cli("eigen --n 3 --mu 0 --grid 4000 --out " + dir, dir) == 0);
  const auto rows = parse_csv(dir + "/eigen.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == doctest::Approx(9.8696).epsilon(5e-3));
}

TEST_CASE("potential profile hits the closed-form value at r = 0.5") {
  const std::string dir = kTmp + "/profile";
  REQUIRE(run_cli("potential-profile --n 3 --variant exact --samples 100 --out " + dir,
                  dir) == 0);
  const auto rows = parse_csv(dir + "/potential-profile.csv");
  REQUIRE(rows.size() == 100);
  bool found = false;
  for (const auto& r : rows)
    if (r[0] == 0.5) {
      CHECK(r[1] == doctest::Approx(16.0));
      found = true;
    }
  CHECK(found);
  CHECK(std::isinf(rows.back()[1])); // the boundary sample of the exact variant
}

TEST_CASE("subcritical cost sweep exits with the hypothesis error") {
  const std::string dir = kTmp + "/subcrit";
  std::string err;
  const int rc =
      run_cli("cost-sweep --mu 0.2 --eps-list 0.1 0.01 --out " + dir, dir, &err);
  CHECK(rc == 2);
  CHECK(err.find("mu must exceed ((n-2)/2)^2") != std::string::npos);
  CHECK(err.find("\"error\"") != std::string::npos); // machine-readable JSON
}

TEST_CASE("unknown config keys are rejected") {
  const std::string dir = kTmp + "/badkey";
  fs::create_directories(dir);
  std::ofstream(dir + "/cfg.json")
      << R"({"experiment":"eigen","mu":0.0,"bogus_knob":1})";
  std::string err;
  const int rc = run_cli("eigen --config " + dir + "/cfg.json --out " + dir, dir, &err);
  CHECK(rc == 2);
  CHECK(err.find("bogus_knob") != std::string::npos);
}

TEST_CASE("determinism: identical config and seed, different thread counts") {
  const std::string dir1 = kTmp + "/det1";
  const std::string dir2 = kTmp + "/det2";
  const std::string args = "eps-sweep --mu 0.3 --eps-list 0.1 0.01 --grid 1200 --seed 7";
  REQUIRE(run_cli(args + " --threads 1 --out " + dir1, dir1) == 0);
  REQUIRE(run_cli(args + " --threads 4 --out " + dir2, dir2) == 0);
  CHECK(slurp(dir1 + "/eps-sweep.csv") == slurp(dir2 + "/eps-sweep.csv"));
}

TEST_CASE("a run sidecar reproduces the run byte for byte") {
  const std::string dir1 = kTmp + "/rt1";
  const std::string dir2 = kTmp + "/rt2";
  REQUIRE(run_cli("blowup-scan --mu 0.3 --N-list 10 100 --T 0.1 --grid 400 --out " + dir1,
                  dir1) == 0);
  REQUIRE(run_cli("blowup-scan --config " + dir1 + "/blowup-scan.json --out " + dir2,
                  dir2) == 0);
  CHECK(slurp(dir1 + "/blowup-scan.csv") == slurp(dir2 + "/blowup-scan.csv"));
}

TEST_CASE("SHL_OUT overrides --out") {
  const std::string flagdir = kTmp + "/flag_out";
  const std::string envdir = kTmp + "/env_out";
  fs::create_directories(flagdir);
  fs::remove_all(envdir);
  const std::string cmd = "SHL_OUT=" + envdir + " " + cli_bin() +
                          " potential-profile --samples 10 --out " + flagdir +
                          " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(envdir + "/potential-profile.csv"));
  CHECK_FALSE(fs::exists(flagdir + "/potential-profile.csv"));
}

TEST_CASE("config parser: strictness and round trip") {
  using namespace shl;
  CHECK_THROWS_AS((void)parse_config("not json"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"n":3})"), ConfigError); // no experiment
  CHECK_THROWS_AS((void)parse_config(R"({"experiment":"nope"})"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"experiment":"eigen","samples":5})"),
                  ConfigError); // samples is not an eigen parameter
  const auto c = parse_config(
      R"({"experiment":"eps-sweep","n":4,"mu":1.5,"eps_list":[0.1,0.01],
          "gauge":{"type":"ball","R":2.0},"grid":{"M":500,"q":0.9}})");
  CHECK(c.n == 4);
  CHECK(c.gauge.radius == 2.0);
  CHECK(c.grid_M == 500);
  CHECK(c.grid_q == 0.9);
  validate_config(c);
  // resolved JSON parses back to the same config
  const auto c2 = parse_config(config_to_json(c));
  CHECK(c2.n == c.n);
  CHECK(c2.eps_list == c.eps_list);
  CHECK(c2.mu == c.mu);
}

TEST_CASE("config validation catches experiment-specific violations") {
  using namespace shl;
  auto base = parse_config(R"({"experiment":"cost-sweep","mu":0.2,"eps_list":[0.1]})");
  CHECK_THROWS_WITH_AS(validate_config(base), "mu must exceed ((n-2)/2)^2", ConfigError);
  auto inc = parse_config(R"({"experiment":"eps-sweep","mu":0.3,"eps_list":[0.01,0.1]})");
  CHECK_THROWS_AS(validate_config(inc), ConfigError);
  auto badn = parse_config(R"({"experiment":"eigen","n":2,"mu":0})");
  CHECK_THROWS_AS(validate_config(badn), ConfigError);
  auto badu0 = parse_config(
      R"({"experiment":"heat","mu":0.1,"variant":"truncated","N":10,"u0":"spikes"})");
  CHECK_THROWS_AS(validate_config(badu0), ConfigError);
}
