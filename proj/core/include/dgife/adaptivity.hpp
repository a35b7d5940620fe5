#pragma once

#include <optional>
#include <vector>

#include "dgife/norms.hpp"

namespace dgife {

// One elliptic interface problem with its manufactured solution and
// discretization parameters, ready for solve-mark-refine cycles.
struct AdaptiveProblem {
  EllipseCurve curve{{0, 0}, 1, 1};
  CoefficientField beta;
  double exponent = 5.0;
  CellKind kind = CellKind::Rectangle;
  int base_n = 10;
  DgConfig dg;
  std::optional<QuadGrading> grading;
};

enum class MarkKind { InterfaceOnly, Dorfler };

struct MarkStrategy {
  MarkKind kind = MarkKind::Dorfler;
  double theta = 0.2;  // bulk fraction, Dorfler only
};

struct AdaptiveState {
  // Meshes the problem was solved on, one per iteration.
  std::vector<CartesianMesh> meshes;
  // Per-iteration errors; n holds the iteration index.
  std::vector<StudyRow> history;
  // Per-iteration local gradient-error indicators eta_K.
  std::vector<std::vector<double>> indicators;
  std::vector<int> marked_counts;
};

// Ids of the elements cut by the curve.
std::vector<int> mark_interface(const ElementClassification& cls);

// Bulk marking: sort indicators descending (ties by ascending id) and
// return the shortest prefix whose squared sum reaches theta times the
// total squared sum.  All-zero indicators give an empty set.
std::vector<int> mark_dorfler(const std::vector<double>& indicators,
                              double theta);

// Solve, compute local indicators, mark, refine; repeat.  Stops after
// max_iters solves or when nothing is marked.  The recorded history has
// one row per solve.
AdaptiveState adapt_loop(const AdaptiveProblem& problem,
                         const MarkStrategy& strategy, int max_iters);

}  // namespace dgife
