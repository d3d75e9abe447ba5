#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hh/runner.hpp"

using namespace hh;

namespace {

struct RunOutput {
  int code;
  std::string out;
  std::string err;
};

RunOutput run(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run_command(cfg, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("config validation failures exit 2") {
  RunConfig cfg;
  cfg.command = "nonsense";
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "verify";  // neither --family nor --file
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "verify";
  cfg.family = "desitter_w0";
  cfg.file = "also_a_file.json";
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "verify";
  cfg.family = "desitter_w0";
  cfg.points = 0;
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "verify";
  cfg.family = "desitter_w0";
  cfg.tol = -1.0;
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "slice";
  cfg.family = "desitter_u_form";  // missing --variant
  CHECK(run(cfg).code == 2);

  cfg = RunConfig{};
  cfg.command = "solve-bfp";  // missing --grid
  CHECK(run(cfg).code == 2);
}

TEST_CASE("catalog lists families") {
  RunConfig cfg;
  cfg.command = "catalog";
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("desitter_w0\n") != std::string::npos);
  CHECK(r.out.find("sigma_family_2\n") != std::string::npos);
}

TEST_CASE("verify catalog families through the front end") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.family = "desitter_w0";
  cfg.lambda = 3.0;
  cfg.tau = 1.0;
  cfg.points = 30;
  cfg.tol = 1e-9;
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"pass\": true") != std::string::npos);
  CHECK(r.out.find("\"schema\": 1") != std::string::npos);

  RunConfig c2;
  c2.command = "verify";
  c2.family = "sigma_family_1";
  c2.tol = 1e-8;
  c2.points = 20;
  CHECK(run(c2).code == 0);
}

TEST_CASE("degenerate slot override fails with a structured report") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.family = "sigma_family_1";
  cfg.sets = {{"a", "1"}};
  const RunOutput r = run(cfg);
  CHECK(r.code == 1);
  CHECK(r.out.find("degenerate Sigma") != std::string::npos);
  CHECK(r.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("unknown family fails with exit 1 and an error entry") {
  RunConfig cfg;
  cfg.command = "verify";
  cfg.family = "no_such_family";
  const RunOutput r = run(cfg);
  CHECK(r.code == 1);
  CHECK(r.out.find("unknown family") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::string path_a = temp_path("rep_a.json");
  const std::string path_b = temp_path("rep_b.json");
  RunConfig cfg;
  cfg.command = "verify";
  cfg.family = "sigma_family_2";
  cfg.points = 15;
  cfg.out = path_a;
  CHECK(run(cfg).code == 0);
  cfg.out = path_b;
  CHECK(run(cfg).code == 0);
  const std::string a = slurp(path_a);
  const std::string b = slurp(path_b);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.find("1e") != std::string::npos);  // scientific notation throughout
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("pipeline command runs the full chain") {
  RunConfig cfg;
  cfg.command = "pipeline";
  cfg.family = "sigma_family_1";
  cfg.points = 15;
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("pullback_step4") != std::string::npos);
  CHECK(r.out.find("sigma_constraint_residual") != std::string::npos);

  RunConfig bad;
  bad.command = "pipeline";
  bad.family = "desitter_u_form";
  CHECK(run(bad).code == 2);
}

TEST_CASE("slice command certifies real forms") {
  RunConfig cfg;
  cfg.command = "slice";
  cfg.family = "desitter_u_form";
  cfg.variant = "euclidean";
  cfg.lambda = -6.0;
  cfg.points = 15;
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"signature\": \"++++\"") != std::string::npos);
  CHECK(r.out.find("\"invariant_sign\": \"positive\"") != std::string::npos);

  RunConfig lor;
  lor.command = "slice";
  lor.family = "desitter_u_form";
  lor.variant = "lorentzian";
  lor.points = 10;
  const RunOutput rl = run(lor);
  CHECK(rl.code == 0);
  CHECK(rl.out.find("\"signature\": \"+++-\"") != std::string::npos);
  CHECK(rl.out.find("chain_pullback") != std::string::npos);

  RunConfig leak;
  leak.command = "slice";
  leak.family = "sigma_xi_phi";
  leak.variant = "neutral_2";  // ln T payload cannot survive T -> i t
  CHECK(run(leak).code == 1);

  RunConfig n1;
  n1.command = "slice";
  n1.family = "sigma_xi_phi";
  n1.variant = "neutral_1";
  n1.points = 12;
  const RunOutput rn = run(n1);
  CHECK(rn.code == 0);
  CHECK(rn.out.find("\"signature\": \"++--\"") != std::string::npos);
  // lower signs carry the para-Kaehler bookkeeping: invariant below zero
  CHECK(rn.out.find("\"invariant_sign\": \"negative\"") != std::string::npos);
}

TEST_CASE("solve-bfp writes a grid file and a report") {
  const std::string rep_path = temp_path("grid_rep.json");
  const std::string csv_path = temp_path("grid.csv");
  RunConfig cfg;
  cfg.command = "solve-bfp";
  cfg.grid = "9,1,2,0,1,0,1";
  cfg.bc = "x^2 - y^2";
  cfg.lambda = 3.0;
  cfg.out = rep_path;
  cfg.grid_out = csv_path;
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  const std::string csv = slurp(csv_path);
  CHECK(csv.rfind("# dims t x y\n", 0) == 0);
  CHECK(csv.find("8,8,8,") != std::string::npos);
  const std::string rep = slurp(rep_path);
  CHECK(rep.find("\"residual_norm\"") != std::string::npos);
  CHECK(rep.find("\"pass\": true") != std::string::npos);
  std::remove(rep_path.c_str());
  std::remove(csv_path.c_str());

  RunConfig bad = cfg;
  bad.grid = "9,1,2,0,1";
  CHECK(run(bad).code == 2);
}

TEST_CASE("user family files load and verify") {
  const std::string fam_path = temp_path("family.json");
  {
    std::ofstream f(fam_path);
    f << R"json({
      "id": "user_exponential",
      "formalism": "Sigma",
      "payload": {"Sigma": "-(1/2)*phi^2 + exp(v)*(xi*phi + xi^2)"},
      "params": {"Lambda": 3.0, "tau": 1.0},
      "box": [[0.7, 1.6], [0.3, 0.9], [0.0, 1.0], [-0.5, 0.5]],
      "expected": {"sd_weyl_zero": true, "asd_weyl_nonzero": true}
    })json";
  }
  RunConfig cfg;
  cfg.command = "verify";
  cfg.file = fam_path;
  cfg.points = 15;
  const RunOutput r = run(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("user_exponential") != std::string::npos);
  CHECK(r.out.find("\"crucial_residual\"") != std::string::npos);

  // Malformed file: config error.
  {
    std::ofstream f(fam_path);
    f << "{\"formalism\": \"Sigma\"}";
  }
  CHECK(run(cfg).code == 2);
  std::remove(fam_path.c_str());
}

TEST_CASE("family files cover the key-function formalism and box overrides") {
  const std::string fam_path = temp_path("wfam.json");
  {
    std::ofstream f(fam_path);
    f << R"json({
      "id": "user_trivial_key",
      "formalism": "W",
      "payload": {"W": "0"},
      "params": {"Lambda": 3.0, "tau": 1.0},
      "box": [[0.5, 2.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]],
      "expected": {"full_weyl_zero": true}
    })json";
  }
  RunConfig cfg;
  cfg.command = "verify";
  cfg.file = fam_path;
  cfg.points = 10;
  CHECK(run(cfg).code == 0);

  // An override box that slides onto the singular locus must fail loudly.
  cfg.box = parse_box_flag("-0.01:0.01,0:1,0:1,0:1");
  CHECK(run(cfg).code == 1);
  std::remove(fam_path.c_str());
}

TEST_CASE("worker count respects the environment cap") {
  setenv("HH_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  setenv("HH_THREADS", "2", 1);
  CHECK(worker_count() <= 2);
  unsetenv("HH_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("box flag parsing") {
  const Box b = parse_box_flag("0.5:2,0:1,-1:1,0:0.5");
  CHECK(b[0][0] == 0.5);
  CHECK(b[0][1] == 2.0);
  CHECK(b[2][0] == -1.0);
  CHECK_THROWS_AS(parse_box_flag("1:2,3:4"), ConfigError);
  CHECK_THROWS_AS(parse_box_flag("a:b,0:1,0:1,0:1"), ConfigError);
}
