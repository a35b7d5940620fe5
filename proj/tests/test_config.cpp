#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgife/config.hpp"
#include "dgife/runner.hpp"
#include "doctest.h"

using namespace dgife;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("empty config carries the default study") {
  RunConfig cfg = parse_config_text("");
  CHECK(cfg.cells == CellKind::Triangle);
  CHECK(cfg.dg.epsilon == -1);
  CHECK(cfg.dg.alpha == 1.0);
  CHECK(cfg.dg.sigma0 == 1000.0);
  CHECK(cfg.problem.beta_minus == 1.0);
  CHECK(cfg.problem.beta_plus == 10.0);
  CHECK(cfg.problem.exponent == 5.0);
  CHECK(cfg.problem.center_x == -0.2);
  CHECK(cfg.problem.center_y == 0.1);
  CHECK(cfg.problem.axis_a == doctest::Approx(M_PI / 6.28));
  CHECK(cfg.problem.axis_b == doctest::Approx(1.5 * M_PI / 6.28));
  CHECK(cfg.study.mode == StudyConfig::Mode::Uniform);
  CHECK(cfg.study.n_list == std::vector<int>{10, 20, 40, 80, 160});
  CHECK(cfg.solver.method == SolverConfig::Method::Direct);
}

TEST_CASE("sections and comments parse") {
  RunConfig cfg = parse_config_text(
      "# contrast study\n"
      "seed = 7\n"
      "[problem]\n"
      "beta_plus = 1000  ; large jump\n"
      "exponent = 0.5\n"
      "[discretization]\n"
      "cells = rectangle\n"
      "epsilon = 1\n"
      "sigma0 = 100\n"
      "[study]\n"
      "mode = adaptive\n"
      "strategy = interface\n"
      "max_iters = 7\n"
      "n_list = 10, 20, 40\n"
      "[solver]\n"
      "method = iterative\n"
      "tol = 1e-8\n"
      "[output]\n"
      "dir = /tmp/x\n"
      "dump_mesh = true\n");
  CHECK(cfg.seed == 7);
  CHECK(cfg.problem.beta_plus == 1000.0);
  CHECK(cfg.problem.exponent == 0.5);
  CHECK(cfg.cells == CellKind::Rectangle);
  CHECK(cfg.dg.epsilon == 1);
  CHECK(cfg.dg.sigma0 == 100.0);
  CHECK(cfg.study.mode == StudyConfig::Mode::Adaptive);
  CHECK(cfg.study.strategy == MarkKind::InterfaceOnly);
  CHECK(cfg.study.max_iters == 7);
  CHECK(cfg.study.n_list == std::vector<int>{10, 20, 40});
  CHECK(cfg.solver.method == SolverConfig::Method::Iterative);
  CHECK(cfg.solver.tol == 1e-8);
  CHECK(cfg.output.dir == "/tmp/x");
  CHECK(cfg.output.dump_mesh);
  CHECK(cfg.grading().has_value());
  CHECK(cfg.grading()->center.x == -0.2);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("[problem]\nbogus = 1\n") == 2);
  CHECK(line_of("\n\n[nowhere]\n") == 3);
  CHECK(line_of("[problem]\nbeta_plus = abc\n") == 2);
  CHECK(line_of("[problem]\nbeta_plus = 3x\n") == 2);
  CHECK(line_of("no_equals_here\n") == 1);
  CHECK(line_of("[study]\nn_list = 10,,20\n") == 2);
  CHECK(line_of("stray = 1\n") == 1);
  CHECK(line_of("[output]\ndump_mesh = maybe\n") == 2);
}

TEST_CASE("validation failures name the field") {
  auto field_of = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text);
    } catch (const ValidationError& e) {
      return e.field;
    }
    return "";
  };
  CHECK(field_of("[discretization]\nepsilon = 2\n") == "epsilon");
  CHECK(field_of("[problem]\nbeta_minus = -1\n") == "beta_minus");
  CHECK(field_of("[problem]\nexponent = -0.5\n") == "exponent");
  CHECK(field_of("[study]\ntheta = 1.5\n") == "theta");
  CHECK(field_of("[study]\nn_list = 1\n") == "n_list");
  CHECK(field_of("[discretization]\nsigma0 = -5\n") == "sigma0");
}

TEST_CASE("serialization round-trips") {
  RunConfig cfg = parse_config_text(
      "[problem]\nbeta_plus = 1000\nexponent = 0.5\n"
      "[discretization]\ncells = rectangle\nepsilon = 1\nsigma0 = 100\n"
      "[study]\nn_list = 10,20\ntheta = 0.3\n");
  const std::string s1 = serialize_config(cfg);
  const std::string s2 = serialize_config(parse_config_text(s1));
  CHECK(s1 == s2);
  // defaults round-trip too
  const std::string d1 = serialize_config(RunConfig{});
  CHECK(d1 == serialize_config(parse_config_text(d1)));
}

TEST_CASE("config files load from disk") {
  const std::string dir = "config_test_io";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir + "/a.ini");
    f << "[problem]\nbeta_plus = 42\n";
  }
  RunConfig cfg = parse_config(dir + "/a.ini");
  CHECK(cfg.problem.beta_plus == 42.0);
  CHECK_THROWS_AS(parse_config(dir + "/missing.ini"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("uniform runner writes matching csv and table") {
  RunConfig cfg = parse_config_text(
      "[study]\nn_list = 4,8\n"
      "[output]\ndir = runner_test_out\n");
  auto res = run_convergence_study(cfg);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].n == 4);
  CHECK(res.rows[1].n == 8);
  CHECK(res.rows[0].dof == 2 * 4 * 4 * 3);
  CHECK(res.rows[1].e.h1 < res.rows[0].e.h1);
  CHECK(slurp("runner_test_out/convergence.csv") == res.csv);
  CHECK(res.csv.find("N,DoF,") == 0);
  CHECK(res.table.find("rate") != std::string::npos);
  // determinism: a second run reproduces the csv byte for byte
  auto res2 = run_convergence_study(cfg);
  CHECK(res2.csv == res.csv);
  std::filesystem::remove_all("runner_test_out");
}

TEST_CASE("runner attaches the stage and grid size to failures") {
  RunConfig cfg = parse_config_text(
      "[study]\nn_list = 4\n"
      "[solver]\nmethod = iterative\nmax_iters = 1\ntol = 1e-14\n"
      "[output]\ndir = runner_test_fail\n");
  bool seen = false;
  try {
    run_convergence_study(cfg);
  } catch (const Error& e) {
    seen = true;
    CHECK(std::string(e.what()).find("solve failed at N=4") !=
          std::string::npos);
  }
  CHECK(seen);
  std::filesystem::remove_all("runner_test_fail");
}

TEST_CASE("adaptive runner records one row per pass and dumps meshes") {
  RunConfig cfg = parse_config_text(
      "[problem]\nbeta_plus = 1000\n"
      "[discretization]\ncells = rectangle\nepsilon = 1\n"
      "[study]\nmode = adaptive\nstrategy = interface\nmax_iters = 3\n"
      "[output]\ndir = runner_test_adapt\ndump_mesh = true\n");
  auto res = run_adaptive_study(cfg);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].elements == 100);
  CHECK(res.rows[1].elements == 178);
  CHECK(res.rows[2].elements == 334);
  CHECK(slurp("runner_test_adapt/adaptive.csv") == res.csv);
  CHECK(std::filesystem::exists("runner_test_adapt/mesh_iter_00.txt"));
  CHECK(std::filesystem::exists("runner_test_adapt/mesh_iter_02.txt"));
  CHECK(res.table.find("iter") != std::string::npos);
  std::filesystem::remove_all("runner_test_adapt");
}
