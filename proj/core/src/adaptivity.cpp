#include "dgife/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dgife/sparse.hpp"

namespace dgife {

std::vector<int> mark_interface(const ElementClassification& cls) {
  std::vector<int> out;
  for (size_t e = 0; e < cls.is_interface.size(); ++e)
    if (cls.is_interface[e]) out.push_back(static_cast<int>(e));
  return out;
}

std::vector<int> mark_dorfler(const std::vector<double>& indicators,
                              double theta) {
  if (theta <= 0 || theta >= 1)
    throw ValidationError("theta", "must be in (0,1)");
  const int n = static_cast<int>(indicators.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (indicators[a] != indicators[b]) return indicators[a] > indicators[b];
    return a < b;
  });
  double total = 0;
  for (int id : order) total += indicators[id] * indicators[id];
  if (total == 0) return {};
  const double target = theta * total;
  std::vector<int> marked;
  double acc = 0;
  for (int id : order) {
    marked.push_back(id);
    acc += indicators[id] * indicators[id];
    if (acc >= target) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

AdaptiveState adapt_loop(const AdaptiveProblem& problem,
                         const MarkStrategy& strategy, int max_iters) {
  problem.dg.validate();
  ManufacturedSolution sol(problem.curve, problem.beta, problem.exponent);
  AdaptiveState state;
  CartesianMesh mesh = build_uniform(problem.base_n, problem.kind);
  for (int iter = 0; iter < max_iters; ++iter) {
    auto cls = classify(mesh, problem.curve);
    auto bases = build_bases(mesh, cls, problem.beta);
    auto dofs = DofMap::build(mesh);
    auto f = [&](Point q, Side s) { return sol.source(q, s); };
    auto g = [&](Point q) { return sol.boundary(q); };
    auto sys = assemble_system(mesh, cls, bases, problem.beta, sol.curve(), f,
                               g, problem.dg, problem.grading);
    auto u = solve_direct(sys.matrix, sys.rhs, sys.row_coords);
    auto e = compute_norms(u, sol, mesh, cls, bases, dofs, problem.dg,
                           problem.grading);
    auto eta = element_h1_errors(u, sol, mesh, cls, bases, dofs,
                                 problem.dg.volume_order, problem.grading);

    StudyRow row;
    row.n = iter;
    row.elements = mesh.n_elements();
    row.dof = dofs.total;
    row.e = e;
    state.history.push_back(row);
    state.indicators.push_back(eta);
    state.meshes.push_back(mesh);

    // an error at roundoff of the solution scale marks nothing
    double scale = 0;
    for (double v : u) scale = std::max(scale, std::abs(v));
    std::vector<int> marked;
    if (e.h1 > 1e-12 * (1 + scale))
      marked = strategy.kind == MarkKind::InterfaceOnly
                   ? mark_interface(cls)
                   : mark_dorfler(eta, strategy.theta);
    state.marked_counts.push_back(static_cast<int>(marked.size()));
    if (marked.empty() || iter + 1 == max_iters) break;
    mesh = refine(mesh, marked);
  }
  return state;
}

}  // namespace dgife
