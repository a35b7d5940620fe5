#pragma once

#include <utility>
#include <vector>

#include "dgife/geometry.hpp"

namespace dgife {

struct Triplet {
  int r = 0, c = 0;
  double v = 0;
};

// Compressed sparse row matrix. Column indices are strictly increasing
// within each row and exact zeros are dropped during compression.
class CsrMatrix {
 public:
  int rows = 0, cols = 0;
  std::vector<int> ptr;  // size rows + 1
  std::vector<int> idx;
  std::vector<double> val;

  static CsrMatrix from_triplets(int rows, int cols,
                                 std::vector<Triplet> entries);

  int nnz() const { return static_cast<int>(val.size()); }
  std::vector<double> multiply(const std::vector<double>& x) const;
  CsrMatrix transpose() const;
  CsrMatrix symmetric_part() const;  // (A + A^T) / 2
  bool is_symmetric(double rel_tol) const;
  double max_abs() const;
};

// Orderings return a permutation: position k of the reordered matrix
// holds original index perm[k].
std::vector<int> rcm_ordering(const CsrMatrix& a);
std::vector<int> nd_ordering(const CsrMatrix& a);
// RCM for small systems, nested dissection once fill becomes the concern.
std::vector<int> fill_reducing_ordering(const CsrMatrix& a);
// Nested dissection with median coordinate bisection; coords[i] locates
// row i.  Much lower fill than the graph heuristics on locally refined
// meshes, where rows cluster along curved fronts.
std::vector<int> geometric_nd_ordering(const CsrMatrix& a,
                                       const std::vector<Point>& coords);

// Sparse LU with partial pivoting (left-looking, Gilbert-Peierls).
class SparseLu {
 public:
  SparseLu(const CsrMatrix& a, std::vector<int> perm);
  explicit SparseLu(const CsrMatrix& a)
      : SparseLu(a, fill_reducing_ordering(a)) {}

  // Solves Ax=b with one pass of iterative refinement.
  std::vector<double> solve(const std::vector<double>& b) const;
  long long factor_nnz() const { return nnz_l_ + nnz_u_; }

 private:
  std::vector<double> solve_factored(const std::vector<double>& b) const;

  int n_ = 0;
  const CsrMatrix a_;
  std::vector<int> perm_;     // symmetric ordering, new -> old
  std::vector<int> pinv_;     // old row -> pivot position
  std::vector<int> lp_, li_;  // L in CSC, unit diagonal implicit
  std::vector<double> lx_;
  std::vector<int> up_, ui_;  // U in CSC, diagonal stored last per column
  std::vector<double> ux_;
  long long nnz_l_ = 0, nnz_u_ = 0;
};

std::vector<double> solve_direct(const CsrMatrix& a,
                                 const std::vector<double>& b);
// Same, ordered by geometric dissection of the row coordinates.
std::vector<double> solve_direct(const CsrMatrix& a,
                                 const std::vector<double>& b,
                                 const std::vector<Point>& coords);

struct IterativeOptions {
  double tol = 1e-10;
  int max_iters = 10000;
  int restart = 60;
};

// Restarted GMRES with diagonal (Jacobi) preconditioning.
std::vector<double> solve_iterative(const CsrMatrix& a,
                                    const std::vector<double>& b,
                                    const IterativeOptions& opt = {});

// Smallest eigenvalue of A v = lambda G v by inverse power iteration,
// for symmetric A and symmetric positive definite G.
std::pair<double, std::vector<double>> min_generalized_eig(
    const CsrMatrix& a_sym, const CsrMatrix& g, double tol = 1e-8,
    int max_iters = 2000);

}  // namespace dgife
