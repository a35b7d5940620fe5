#include "dgife/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgife/errors.hpp"

namespace dgife {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& v, int line) {
  size_t used = 0;
  double d;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + v + "'");
  }
  if (used != v.size())
    throw ParseError(line, "trailing characters in number '" + v + "'");
  return d;
}

long long parse_int(const std::string& v, int line) {
  size_t used = 0;
  long long i;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + v + "'");
  }
  if (used != v.size())
    throw ParseError(line, "trailing characters in integer '" + v + "'");
  return i;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "expected a boolean, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ParseError(line, "empty entry in integer list");
    out.push_back(static_cast<int>(parse_int(item, line)));
  }
  if (out.empty()) throw ParseError(line, "empty integer list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](const char* field, double v) {
    if (!(v > 0)) throw ValidationError(field, "must be positive");
  };
  positive("beta_minus", problem.beta_minus);
  positive("beta_plus", problem.beta_plus);
  positive("axis_a", problem.axis_a);
  positive("axis_b", problem.axis_b);
  if (problem.exponent < 0)
    throw ValidationError("exponent", "must be nonnegative");
  dg.validate();
  if (study.n_list.empty())
    throw ValidationError("n_list", "must name at least one grid");
  for (int n : study.n_list)
    if (n < 2) throw ValidationError("n_list", "grid sizes must be at least 2");
  if (study.base_n < 2)
    throw ValidationError("base_n", "must be at least 2");
  if (!(study.theta > 0 && study.theta < 1))
    throw ValidationError("theta", "must be in (0,1)");
  if (study.max_iters < 1)
    throw ValidationError("max_iters", "must be at least 1");
  positive("tol", solver.tol);
  if (solver.max_iters < 1)
    throw ValidationError("solver max_iters", "must be at least 1");
  if (solver.restart < 1)
    throw ValidationError("restart", "must be at least 1");
  if (output.field_resolution < 2)
    throw ValidationError("field_resolution", "must be at least 2");
}

EllipseCurve RunConfig::curve() const {
  return EllipseCurve({problem.center_x, problem.center_y}, problem.axis_a,
                      problem.axis_b);
}

CoefficientField RunConfig::beta() const {
  return {problem.beta_minus, problem.beta_plus};
}

std::optional<QuadGrading> RunConfig::grading() const {
  if (problem.exponent >= 2 || problem.exponent == 0) return std::nullopt;
  return QuadGrading{{problem.center_x, problem.center_y}, 12, 0.0};
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    if (size_t h = s.find_first_of("#;"); h != std::string::npos)
      s = s.substr(0, h);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "problem" && section != "discretization" &&
          section != "study" && section != "solver" && section != "output")
        throw ParseError(line, "unknown section '" + section + "'");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    if (val.empty()) throw ParseError(line, "empty value for '" + key + "'");

    if (section.empty()) {
      if (key == "seed") {
        cfg.seed = static_cast<unsigned long long>(parse_int(val, line));
      } else {
        throw ParseError(line, "unknown key '" + key + "' outside sections");
      }
    } else if (section == "problem") {
      if (key == "beta_minus") cfg.problem.beta_minus = parse_double(val, line);
      else if (key == "beta_plus") cfg.problem.beta_plus = parse_double(val, line);
      else if (key == "center_x") cfg.problem.center_x = parse_double(val, line);
      else if (key == "center_y") cfg.problem.center_y = parse_double(val, line);
      else if (key == "axis_a") cfg.problem.axis_a = parse_double(val, line);
      else if (key == "axis_b") cfg.problem.axis_b = parse_double(val, line);
      else if (key == "exponent") cfg.problem.exponent = parse_double(val, line);
      else throw ParseError(line, "unknown key '" + key + "' in [problem]");
    } else if (section == "discretization") {
      if (key == "cells") {
        if (val == "triangle") cfg.cells = CellKind::Triangle;
        else if (val == "rectangle") cfg.cells = CellKind::Rectangle;
        else throw ParseError(line, "cells must be triangle or rectangle");
      } else if (key == "epsilon") {
        cfg.dg.epsilon = static_cast<int>(parse_int(val, line));
      } else if (key == "alpha") {
        cfg.dg.alpha = parse_double(val, line);
      } else if (key == "sigma0") {
        cfg.dg.sigma0 = parse_double(val, line);
      } else if (key == "volume_order") {
        cfg.dg.volume_order = static_cast<int>(parse_int(val, line));
      } else if (key == "edge_order") {
        cfg.dg.edge_order = static_cast<int>(parse_int(val, line));
      } else {
        throw ParseError(line, "unknown key '" + key + "' in [discretization]");
      }
    } else if (section == "study") {
      if (key == "mode") {
        if (val == "uniform") cfg.study.mode = StudyConfig::Mode::Uniform;
        else if (val == "adaptive") cfg.study.mode = StudyConfig::Mode::Adaptive;
        else throw ParseError(line, "mode must be uniform or adaptive");
      } else if (key == "n_list") {
        cfg.study.n_list = parse_int_list(val, line);
      } else if (key == "base_n") {
        cfg.study.base_n = static_cast<int>(parse_int(val, line));
      } else if (key == "strategy") {
        if (val == "interface") cfg.study.strategy = MarkKind::InterfaceOnly;
        else if (val == "bulk") cfg.study.strategy = MarkKind::Dorfler;
        else throw ParseError(line, "strategy must be interface or bulk");
      } else if (key == "theta") {
        cfg.study.theta = parse_double(val, line);
      } else if (key == "max_iters") {
        cfg.study.max_iters = static_cast<int>(parse_int(val, line));
      } else {
        throw ParseError(line, "unknown key '" + key + "' in [study]");
      }
    } else if (section == "solver") {
      if (key == "method") {
        if (val == "direct") cfg.solver.method = SolverConfig::Method::Direct;
        else if (val == "iterative")
          cfg.solver.method = SolverConfig::Method::Iterative;
        else throw ParseError(line, "method must be direct or iterative");
      } else if (key == "tol") {
        cfg.solver.tol = parse_double(val, line);
      } else if (key == "max_iters") {
        cfg.solver.max_iters = static_cast<int>(parse_int(val, line));
      } else if (key == "restart") {
        cfg.solver.restart = static_cast<int>(parse_int(val, line));
      } else {
        throw ParseError(line, "unknown key '" + key + "' in [solver]");
      }
    } else {  // output
      if (key == "dir") {
        cfg.output.dir = val;
      } else if (key == "dump_mesh") {
        cfg.output.dump_mesh = parse_bool(val, line);
      } else if (key == "dump_field") {
        cfg.output.dump_field = parse_bool(val, line);
      } else if (key == "field_resolution") {
        cfg.output.field_resolution = static_cast<int>(parse_int(val, line));
      } else {
        throw ParseError(line, "unknown key '" + key + "' in [output]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "seed = " << c.seed << "\n\n";
  os << "[problem]\n";
  os << "beta_minus = " << fmt(c.problem.beta_minus) << "\n";
  os << "beta_plus = " << fmt(c.problem.beta_plus) << "\n";
  os << "center_x = " << fmt(c.problem.center_x) << "\n";
  os << "center_y = " << fmt(c.problem.center_y) << "\n";
  os << "axis_a = " << fmt(c.problem.axis_a) << "\n";
  os << "axis_b = " << fmt(c.problem.axis_b) << "\n";
  os << "exponent = " << fmt(c.problem.exponent) << "\n\n";
  os << "[discretization]\n";
  os << "cells = "
     << (c.cells == CellKind::Triangle ? "triangle" : "rectangle") << "\n";
  os << "epsilon = " << c.dg.epsilon << "\n";
  os << "alpha = " << fmt(c.dg.alpha) << "\n";
  os << "sigma0 = " << fmt(c.dg.sigma0) << "\n";
  os << "volume_order = " << c.dg.volume_order << "\n";
  os << "edge_order = " << c.dg.edge_order << "\n\n";
  os << "[study]\n";
  os << "mode = "
     << (c.study.mode == StudyConfig::Mode::Uniform ? "uniform" : "adaptive")
     << "\n";
  os << "n_list = ";
  for (size_t i = 0; i < c.study.n_list.size(); ++i)
    os << (i ? "," : "") << c.study.n_list[i];
  os << "\n";
  os << "base_n = " << c.study.base_n << "\n";
  os << "strategy = "
     << (c.study.strategy == MarkKind::InterfaceOnly ? "interface" : "bulk")
     << "\n";
  os << "theta = " << fmt(c.study.theta) << "\n";
  os << "max_iters = " << c.study.max_iters << "\n\n";
  os << "[solver]\n";
  os << "method = "
     << (c.solver.method == SolverConfig::Method::Direct ? "direct"
                                                         : "iterative")
     << "\n";
  os << "tol = " << fmt(c.solver.tol) << "\n";
  os << "max_iters = " << c.solver.max_iters << "\n";
  os << "restart = " << c.solver.restart << "\n\n";
  os << "[output]\n";
  os << "dir = " << c.output.dir << "\n";
  os << "dump_mesh = " << (c.output.dump_mesh ? "true" : "false") << "\n";
  os << "dump_field = " << (c.output.dump_field ? "true" : "false") << "\n";
  os << "field_resolution = " << c.output.field_resolution << "\n";
  return os.str();
}

}  // namespace dgife
