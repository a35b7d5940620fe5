#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dgife/adaptivity.hpp"

namespace dgife {

struct ProblemConfig {
  double beta_minus = 1.0;
  double beta_plus = 10.0;
  double center_x = -0.2;
  double center_y = 0.1;
  double axis_a = M_PI / 6.28;
  double axis_b = 1.5 * M_PI / 6.28;
  double exponent = 5.0;
};

struct StudyConfig {
  enum class Mode { Uniform, Adaptive };
  Mode mode = Mode::Uniform;
  std::vector<int> n_list{10, 20, 40, 80, 160};
  int base_n = 10;  // starting grid of the adaptive loop
  MarkKind strategy = MarkKind::Dorfler;
  double theta = 0.2;
  int max_iters = 10;
};

struct SolverConfig {
  enum class Method { Direct, Iterative };
  Method method = Method::Direct;
  double tol = 1e-10;
  int max_iters = 10000;
  int restart = 60;
};

struct OutputConfig {
  std::string dir = ".";
  bool dump_mesh = false;
  bool dump_field = false;
  int field_resolution = 256;
};

struct RunConfig {
  ProblemConfig problem;
  CellKind cells = CellKind::Triangle;
  DgConfig dg;
  StudyConfig study;
  SolverConfig solver;
  OutputConfig output;
  unsigned long long seed = 1;

  void validate() const;  // throws ValidationError with the field name

  EllipseCurve curve() const;
  CoefficientField beta() const;
  // Quadrature grading toward the solution singularity, when it has one.
  std::optional<QuadGrading> grading() const;
};

// key = value lines under [section] headers; '#' or ';' start a comment.
// Missing keys keep their defaults, unknown keys or sections are refused.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// Canonical form: every field, fixed order, full precision.  Parsing the
// result reproduces the config exactly.
std::string serialize_config(const RunConfig& config);

}  // namespace dgife
