#include "dgife/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dgife/errors.hpp"
#include "dgife/sparse.hpp"

namespace dgife {

namespace {

template <class F>
auto stage(const char* name, int n, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(std::string(name) + " failed at N=" + std::to_string(n) +
                ": " + e.what());
  }
}

std::vector<double> run_solver(const RunConfig& cfg, const DgSystem& sys) {
  if (cfg.solver.method == SolverConfig::Method::Direct)
    return solve_direct(sys.matrix, sys.rhs, sys.row_coords);
  IterativeOptions opt;
  opt.tol = cfg.solver.tol;
  opt.max_iters = cfg.solver.max_iters;
  opt.restart = cfg.solver.restart;
  return solve_iterative(sys.matrix, sys.rhs, opt);
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir + "/" + name);
  if (!f) throw Error("cannot write " + dir + "/" + name);
  f << content;
}

struct SolveOutcome {
  StudyRow row;
  std::vector<double> eta;
};

SolveOutcome solve_once(const RunConfig& cfg, const CartesianMesh& mesh,
                        const ManufacturedSolution& sol, int n,
                        bool want_eta, std::string* mesh_dump,
                        std::string* field_dump) {
  auto cls = stage("classify", n, [&] { return classify(mesh, cfg.curve()); });
  stage("validate", n, [&] {
    if (auto issue = validate_hypotheses(mesh, cls, sol.curve()))
      throw HypothesisViolation(issue->element, issue->reason,
                                issue->message);
    return 0;
  });
  auto bases =
      stage("basis", n, [&] { return build_bases(mesh, cls, cfg.beta()); });
  auto dofs = DofMap::build(mesh);
  auto sys = stage("assemble", n, [&] {
    auto f = [&](Point q, Side s) { return sol.source(q, s); };
    auto g = [&](Point q) { return sol.boundary(q); };
    return assemble_system(mesh, cls, bases, cfg.beta(), sol.curve(), f, g,
                           cfg.dg, cfg.grading());
  });
  auto u = stage("solve", n, [&] { return run_solver(cfg, sys); });
  SolveOutcome out;
  out.row.n = n;
  out.row.elements = mesh.n_elements();
  out.row.dof = dofs.total;
  out.row.e = stage("norms", n, [&] {
    return compute_norms(u, sol, mesh, cls, bases, dofs, cfg.dg,
                         cfg.grading());
  });
  if (want_eta)
    out.eta = element_h1_errors(u, sol, mesh, cls, bases, dofs,
                                cfg.dg.volume_order, cfg.grading());
  if (mesh_dump) {
    std::ostringstream os;
    mesh.dump(os, &cls);
    *mesh_dump = os.str();
  }
  if (field_dump) {
    std::ostringstream os;
    export_error_field(os, u, sol, mesh, cls, bases, dofs,
                       cfg.output.field_resolution);
    *field_dump = os.str();
  }
  return out;
}

}  // namespace

std::string format_table(const std::vector<StudyRow>& rows,
                         const std::string& index_name) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s %9s %12s %7s %12s %7s %12s %7s\n",
                index_name.c_str(), "DoF", "Linf", "rate", "L2", "rate",
                "H1", "rate");
  os << buf;
  const StudyRow* prev = nullptr;
  for (const StudyRow& r : rows) {
    auto rate = [&](double cur, double before) -> std::string {
      if (!prev || before == 0 || cur == 0) return "";
      char rb[16];
      std::snprintf(rb, sizeof rb, "%.4f", std::log2(before / cur));
      return rb;
    };
    std::snprintf(buf, sizeof buf, "%6d %9d %12.4e %7s %12.4e %7s %12.4e %7s\n",
                  r.n, r.dof, r.e.linf,
                  rate(r.e.linf, prev ? prev->e.linf : 0).c_str(), r.e.l2,
                  rate(r.e.l2, prev ? prev->e.l2 : 0).c_str(), r.e.h1,
                  rate(r.e.h1, prev ? prev->e.h1 : 0).c_str());
    os << buf;
    prev = &r;
  }
  return os.str();
}

ConvergenceResult run_convergence_study(const RunConfig& cfg,
                                        std::ostream* log) {
  cfg.validate();
  ManufacturedSolution sol(cfg.curve(), cfg.beta(), cfg.problem.exponent);
  ConvergenceResult res;
  for (int n : cfg.study.n_list) {
    auto mesh = build_uniform(n, cfg.cells);
    std::string mesh_dump, field_dump;
    auto out = solve_once(cfg, mesh, sol, n, false,
                          cfg.output.dump_mesh ? &mesh_dump : nullptr,
                          cfg.output.dump_field ? &field_dump : nullptr);
    res.rows.push_back(out.row);
    if (cfg.output.dump_mesh)
      write_file(cfg.output.dir, "mesh_" + std::to_string(n) + ".txt",
                 mesh_dump);
    if (cfg.output.dump_field)
      write_file(cfg.output.dir, "field_" + std::to_string(n) + ".txt",
                 field_dump);
    if (log) *log << "N=" << n << " done, dof=" << out.row.dof << "\n";
  }
  {
    std::ostringstream os;
    write_csv(os, res.rows);
    res.csv = os.str();
  }
  res.table = format_table(res.rows);
  write_file(cfg.output.dir, "convergence.csv", res.csv);
  return res;
}

AdaptiveResult run_adaptive_study(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  AdaptiveProblem prob;
  prob.curve = cfg.curve();
  prob.beta = cfg.beta();
  prob.exponent = cfg.problem.exponent;
  prob.kind = cfg.cells;
  prob.base_n = cfg.study.base_n;
  prob.dg = cfg.dg;
  prob.grading = cfg.grading();
  MarkStrategy strat;
  strat.kind = cfg.study.strategy;
  strat.theta = cfg.study.theta;

  AdaptiveResult res;
  res.state = adapt_loop(prob, strat, cfg.study.max_iters);
  res.rows = res.state.history;
  {
    std::ostringstream os;
    write_csv(os, res.rows);
    res.csv = os.str();
  }
  res.table = format_table(res.rows, "iter");
  write_file(cfg.output.dir, "adaptive.csv", res.csv);
  if (cfg.output.dump_mesh) {
    for (size_t i = 0; i < res.state.meshes.size(); ++i) {
      std::ostringstream os;
      auto cls = classify(res.state.meshes[i], prob.curve);
      res.state.meshes[i].dump(os, &cls);
      char name[32];
      std::snprintf(name, sizeof name, "mesh_iter_%02zu.txt", i);
      write_file(cfg.output.dir, name, os.str());
    }
  }
  if (log)
    *log << "adaptive study: " << res.rows.size() << " iterations, final dof="
         << (res.rows.empty() ? 0 : res.rows.back().dof) << "\n";
  return res;
}

}  // namespace dgife
