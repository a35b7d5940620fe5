#include "dgife/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "dgife/errors.hpp"

namespace dgife {

namespace {

double norm_inf(const std::vector<double>& v) {
  double m = 0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_2(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

double dot_v(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Symmetric adjacency (pattern of A + A^T, no diagonal), index-sorted.
std::vector<std::vector<int>> adjacency(const CsrMatrix& a) {
  const int n = a.rows;
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k) {
      const int j = a.idx[k];
      if (j == i || j >= n) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

// BFS levels from root restricted to `in_set` (mask value `stamp`).
// Returns the level list; nodes reached get level index in `level`.
std::vector<std::vector<int>> bfs_levels(
    const std::vector<std::vector<int>>& adj, int root,
    const std::vector<int>& mask, int stamp, std::vector<int>& level) {
  std::vector<std::vector<int>> levels;
  std::vector<int> frontier{root};
  level[root] = 0;
  while (!frontier.empty()) {
    levels.push_back(frontier);
    std::vector<int> next;
    for (const int u : frontier)
      for (const int v : adj[u])
        if (mask[v] == stamp && level[v] < 0) {
          level[v] = static_cast<int>(levels.size());
          next.push_back(v);
        }
    frontier = std::move(next);
  }
  return levels;
}

// Pseudo-peripheral node of the component of `root` (George-Liu style).
int pseudo_peripheral(const std::vector<std::vector<int>>& adj, int root,
                      const std::vector<int>& mask, int stamp,
                      std::vector<int>& level) {
  int ecc = -1;
  for (int round = 0; round < 8; ++round) {
    std::fill(level.begin(), level.end(), -1);
    auto levels = bfs_levels(adj, root, mask, stamp, level);
    const int e = static_cast<int>(levels.size()) - 1;
    if (e <= ecc) break;
    ecc = e;
    const auto& last = levels.back();
    int best = last[0];
    for (const int u : last)
      if (adj[u].size() < adj[best].size()) best = u;
    root = best;
  }
  return root;
}

// Cuthill-McKee order of one component (not reversed).
void cuthill_mckee(const std::vector<std::vector<int>>& adj, int root,
                   const std::vector<int>& mask, int stamp,
                   std::vector<int>& level, std::vector<char>& seen,
                   std::vector<int>& out) {
  root = pseudo_peripheral(adj, root, mask, stamp, level);
  std::vector<int> queue{root};
  seen[root] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    out.push_back(u);
    std::vector<int> nb;
    for (const int v : adj[u])
      if (mask[v] == stamp && !seen[v]) nb.push_back(v);
    std::sort(nb.begin(), nb.end(), [&](int x, int y) {
      if (adj[x].size() != adj[y].size())
        return adj[x].size() < adj[y].size();
      return x < y;
    });
    for (const int v : nb) {
      seen[v] = 1;
      queue.push_back(v);
    }
  }
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(int rows, int cols,
                                   std::vector<Triplet> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     if (a.r != b.r) return a.r < b.r;
                     return a.c < b.c;
                   });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.ptr.assign(rows + 1, 0);
  size_t i = 0;
  while (i < entries.size()) {
    const int r = entries[i].r;
    const int c = entries[i].c;
    double v = 0;
    while (i < entries.size() && entries[i].r == r && entries[i].c == c)
      v += entries[i++].v;
    if (v != 0.0) {
      m.idx.push_back(c);
      m.val.push_back(v);
      ++m.ptr[r + 1];
    }
  }
  for (int r = 0; r < rows; ++r) m.ptr[r + 1] += m.ptr[r];
  return m;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    double s = 0;
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) s += val[k] * x[idx[k]];
    y[i] = s;
  }
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.ptr.assign(cols + 1, 0);
  for (const int j : idx) ++t.ptr[j + 1];
  for (int j = 0; j < cols; ++j) t.ptr[j + 1] += t.ptr[j];
  t.idx.resize(val.size());
  t.val.resize(val.size());
  std::vector<int> next(t.ptr.begin(), t.ptr.end() - 1);
  for (int i = 0; i < rows; ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) {
      const int p = next[idx[k]]++;
      t.idx[p] = i;
      t.val[p] = val[k];
    }
  return t;
}

CsrMatrix CsrMatrix::symmetric_part() const {
  std::vector<Triplet> tr;
  tr.reserve(2 * val.size());
  for (int i = 0; i < rows; ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) {
      tr.push_back({i, idx[k], 0.5 * val[k]});
      tr.push_back({idx[k], i, 0.5 * val[k]});
    }
  return from_triplets(rows, cols, std::move(tr));
}

double CsrMatrix::max_abs() const {
  double m = 0;
  for (const double v : val) m = std::max(m, std::abs(v));
  return m;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
  const CsrMatrix t = transpose();
  const double scale = std::max(max_abs(), 1e-300);
  if (t.ptr != ptr) {
    // patterns can differ by explicit zeros; fall back to value compare
  }
  for (int i = 0; i < rows; ++i) {
    int ka = ptr[i], kb = t.ptr[i];
    while (ka < ptr[i + 1] || kb < t.ptr[i + 1]) {
      const int ja = ka < ptr[i + 1] ? idx[ka] : cols;
      const int jb = kb < t.ptr[i + 1] ? t.idx[kb] : cols;
      double va = 0, vb = 0;
      if (ja <= jb) va = val[ka++];
      if (jb <= ja) vb = t.val[kb++];
      if (std::abs(va - vb) > rel_tol * scale) return false;
    }
  }
  return true;
}

std::vector<int> rcm_ordering(const CsrMatrix& a) {
  const int n = a.rows;
  const auto adj = adjacency(a);
  std::vector<int> mask(n, 1), level(n, -1), order;
  std::vector<char> seen(n, 0);
  order.reserve(n);
  for (int s = 0; s < n; ++s)
    if (!seen[s]) cuthill_mckee(adj, s, mask, 1, level, seen, order);
  std::reverse(order.begin(), order.end());
  return order;
}

namespace {

void nd_recurse(const std::vector<std::vector<int>>& adj,
                std::vector<int>& mask, int stamp,
                const std::vector<int>& verts, std::vector<int>& level,
                std::vector<char>& seen, std::vector<int>& out) {
  constexpr size_t kLeaf = 64;
  if (verts.empty()) return;
  if (verts.size() <= kLeaf) {
    for (const int v : verts) mask[v] = stamp;
    std::vector<int> sub;
    for (const int v : verts)
      if (!seen[v]) cuthill_mckee(adj, v, mask, stamp, level, seen, sub);
    out.insert(out.end(), sub.begin(), sub.end());
    return;
  }

  for (const int v : verts) mask[v] = stamp;
  const int root =
      pseudo_peripheral(adj, verts.front(), mask, stamp, level);
  std::fill(level.begin(), level.end(), -1);
  const auto levels = bfs_levels(adj, root, mask, stamp, level);

  if (levels.size() < 3) {
    // flat graph; fall back to Cuthill-McKee on the whole set
    std::vector<int> sub;
    for (const int v : verts)
      if (!seen[v]) cuthill_mckee(adj, v, mask, stamp, level, seen, sub);
    out.insert(out.end(), sub.begin(), sub.end());
    return;
  }

  const size_t mid = levels.size() / 2;
  const std::vector<int> separator = levels[mid];
  // peel off the separator, then order the remaining components first
  const int inner = stamp + 1;
  for (const int v : verts) mask[v] = inner;
  for (const int v : separator) mask[v] = stamp;  // excluded from parts

  std::vector<int> comp;
  std::vector<char> in_comp(adj.size(), 0);
  for (const int s : verts) {
    if (mask[s] != inner || in_comp[s]) continue;
    comp.clear();
    comp.push_back(s);
    in_comp[s] = 1;
    for (size_t qi = 0; qi < comp.size(); ++qi)
      for (const int w : adj[comp[qi]])
        if (mask[w] == inner && !in_comp[w]) {
          in_comp[w] = 1;
          comp.push_back(w);
        }
    nd_recurse(adj, mask, inner + 1, comp, level, seen, out);
    for (const int v : comp) mask[v] = 0;
  }
  // separator eliminated last
  for (const int v : separator) mask[v] = stamp;
  std::vector<int> sub;
  for (const int v : separator)
    if (!seen[v]) cuthill_mckee(adj, v, mask, stamp, level, seen, sub);
  out.insert(out.end(), sub.begin(), sub.end());
  for (const int v : separator) mask[v] = 0;
}

}  // namespace

std::vector<int> nd_ordering(const CsrMatrix& a) {
  const int n = a.rows;
  const auto adj = adjacency(a);
  std::vector<int> mask(n, 0), level(n, -1), order;
  std::vector<char> seen(n, 0);
  order.reserve(n);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  nd_recurse(adj, mask, 1, all, level, seen, order);
  return order;
}

std::vector<int> fill_reducing_ordering(const CsrMatrix& a) {
  if (a.rows < 20000) return rcm_ordering(a);
  return nd_ordering(a);
}

SparseLu::SparseLu(const CsrMatrix& a, std::vector<int> perm)
    : n_(a.rows), a_(a), perm_(std::move(perm)) {
  if (a.rows != a.cols)
    throw Error("sparse lu requires a square matrix");
  const int n = n_;
  std::vector<int> iperm(n);
  for (int k = 0; k < n; ++k) iperm[perm_[k]] = k;

  // permuted matrix in CSC: column j holds A(perm, perm[j])
  std::vector<int> cp(n + 1, 0), ci(a.nnz());
  std::vector<double> cx(a.nnz());
  for (int i = 0; i < n; ++i)
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k) ++cp[iperm[a.idx[k]] + 1];
  for (int j = 0; j < n; ++j) cp[j + 1] += cp[j];
  {
    std::vector<int> next(cp.begin(), cp.end() - 1);
    for (int i = 0; i < n; ++i)
      for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k) {
        const int j = iperm[a.idx[k]];
        const int p = next[j]++;
        ci[p] = iperm[i];
        cx[p] = a.val[k];
      }
  }

  pinv_.assign(n, -1);
  lp_.assign(n + 1, 0);
  up_.assign(n + 1, 0);

  std::vector<double> x(n, 0.0);
  std::vector<int> stack(n), pattern;
  std::vector<int> mark(n, -1);
  std::vector<int> pos(n);  // DFS position within a column of L

  pattern.reserve(n);
  for (int j = 0; j < n; ++j) {
    // symbolic: reach of A(:,j) through the graph of finished L columns
    pattern.clear();
    for (int k = cp[j]; k < cp[j + 1]; ++k) {
      int r = ci[k];
      if (mark[r] == j) continue;
      // DFS from r
      int top = 0;
      stack[top] = r;
      pos[top] = pinv_[r] >= 0 ? lp_[pinv_[r]] : -1;
      mark[r] = j;
      while (top >= 0) {
        const int u = stack[top];
        const int col = pinv_[u];
        bool descended = false;
        if (col >= 0) {
          int& p = pos[top];
          while (p < lp_[col + 1]) {
            const int w = li_[p++];
            if (mark[w] != j) {
              mark[w] = j;
              ++top;
              stack[top] = w;
              pos[top] = pinv_[w] >= 0 ? lp_[pinv_[w]] : -1;
              descended = true;
              break;
            }
          }
        }
        if (!descended) {
          pattern.push_back(u);  // postorder: dependencies already listed
          --top;
        }
      }
    }
    // numeric: x = A(:,j); topological order is reverse postorder
    for (const int r : pattern) x[r] = 0.0;
    for (int k = cp[j]; k < cp[j + 1]; ++k) x[ci[k]] = cx[k];
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
      const int u = *it;
      const int col = pinv_[u];
      if (col < 0) continue;
      const double xu = x[u];
      if (xu == 0.0) continue;
      for (int p = lp_[col]; p < lp_[col + 1]; ++p) x[li_[p]] -= lx_[p] * xu;
    }

    // threshold pivoting: keep the diagonal of the permuted matrix when
    // it is within a factor of the column maximum, so fill stays close
    // to what the ordering predicts
    int piv = -1;
    double pmax = 0.0;
    for (const int r : pattern)
      if (pinv_[r] < 0 && std::abs(x[r]) > pmax) {
        pmax = std::abs(x[r]);
        piv = r;
      }
    if (piv < 0)
      throw SingularMatrix(j, "no usable pivot in column " + std::to_string(j));
    if (mark[j] == j && pinv_[j] < 0 && std::abs(x[j]) >= 0.1 * pmax) piv = j;

    // U column j: rows already pivoted, store by pivot position
    for (const int r : pattern)
      if (pinv_[r] >= 0 && x[r] != 0.0) {
        ui_.push_back(pinv_[r]);
        ux_.push_back(x[r]);
      }
    const double d = x[piv];
    pinv_[piv] = j;
    ui_.push_back(j);
    ux_.push_back(d);
    up_[j + 1] = static_cast<int>(ui_.size());

    for (const int r : pattern)
      if (pinv_[r] < 0 && x[r] != 0.0) {
        li_.push_back(r);  // remapped to pivot positions afterwards
        lx_.push_back(x[r] / d);
      }
    lp_[j + 1] = static_cast<int>(li_.size());
  }

  for (int& r : li_) r = pinv_[r];
  nnz_l_ = static_cast<long long>(li_.size());
  nnz_u_ = static_cast<long long>(ui_.size());
}

std::vector<double> SparseLu::solve_factored(
    const std::vector<double>& b) const {
  const int n = n_;
  // c = P_pivot * P_sym * b
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) c[pinv_[k]] = b[perm_[k]];
  // L z = c (unit diagonal)
  for (int j = 0; j < n; ++j) {
    const double zj = c[j];
    if (zj == 0.0) continue;
    for (int p = lp_[j]; p < lp_[j + 1]; ++p) c[li_[p]] -= lx_[p] * zj;
  }
  // U x = z, diagonal stored last in each column
  for (int j = n - 1; j >= 0; --j) {
    const double xj = c[j] / ux_[up_[j + 1] - 1];
    c[j] = xj;
    if (xj == 0.0) continue;
    for (int p = up_[j]; p < up_[j + 1] - 1; ++p) c[ui_[p]] -= ux_[p] * xj;
  }
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[perm_[k]] = c[k];
  return x;
}

std::vector<double> SparseLu::solve(const std::vector<double>& b) const {
  std::vector<double> x = solve_factored(b);
  // one round of iterative refinement in working precision
  std::vector<double> r = a_.multiply(x);
  for (int i = 0; i < n_; ++i) r[i] = b[i] - r[i];
  if (norm_inf(r) > 1e-14 * (norm_inf(b) + a_.max_abs() * norm_inf(x))) {
    const std::vector<double> dx = solve_factored(r);
    for (int i = 0; i < n_; ++i) x[i] += dx[i];
  }
  return x;
}

std::vector<double> solve_direct(const CsrMatrix& a,
                                 const std::vector<double>& b) {
  return SparseLu(a).solve(b);
}

namespace {

struct GeoDissect {
  const CsrMatrix& a;
  const std::vector<Point>& coords;
  std::vector<int> gen, side;
  int stamp = 0;
  std::vector<int> out;

  void run(std::vector<int> rows) {
    if (rows.size() <= 32) {
      out.insert(out.end(), rows.begin(), rows.end());
      return;
    }
    double xmin = coords[rows[0]].x, xmax = xmin;
    double ymin = coords[rows[0]].y, ymax = ymin;
    for (int r : rows) {
      xmin = std::min(xmin, coords[r].x);
      xmax = std::max(xmax, coords[r].x);
      ymin = std::min(ymin, coords[r].y);
      ymax = std::max(ymax, coords[r].y);
    }
    const bool split_x = xmax - xmin >= ymax - ymin;
    std::sort(rows.begin(), rows.end(), [&](int p, int q) {
      double cp = split_x ? coords[p].x : coords[p].y;
      double cq = split_x ? coords[q].x : coords[q].y;
      if (cp != cq) return cp < cq;
      return p < q;
    });
    const size_t mid = rows.size() / 2;
    ++stamp;
    for (size_t i = 0; i < rows.size(); ++i) {
      gen[rows[i]] = stamp;
      side[rows[i]] = i < mid;
    }
    std::vector<int> low, high(rows.begin() + mid, rows.end()), sep;
    const int snap = stamp;  // recursion below reuses the arrays
    for (size_t i = 0; i < mid; ++i) {
      const int r = rows[i];
      bool cut = false;
      for (int k = a.ptr[r]; k < a.ptr[r + 1]; ++k) {
        const int c = a.idx[k];
        if (gen[c] == snap && !side[c]) {
          cut = true;
          break;
        }
      }
      (cut ? sep : low).push_back(r);
    }
    run(std::move(low));
    run(std::move(high));
    out.insert(out.end(), sep.begin(), sep.end());
  }
};

}  // namespace

std::vector<int> geometric_nd_ordering(const CsrMatrix& a,
                                       const std::vector<Point>& coords) {
  if (static_cast<int>(coords.size()) != a.rows)
    throw Error("geometric ordering needs one coordinate per row");
  GeoDissect g{a, coords, std::vector<int>(a.rows, 0),
               std::vector<int>(a.rows, 0), 0, {}};
  g.out.reserve(a.rows);
  std::vector<int> all(a.rows);
  std::iota(all.begin(), all.end(), 0);
  g.run(std::move(all));
  return g.out;
}

std::vector<double> solve_direct(const CsrMatrix& a,
                                 const std::vector<double>& b,
                                 const std::vector<Point>& coords) {
  return SparseLu(a, geometric_nd_ordering(a, coords)).solve(b);
}

std::vector<double> solve_iterative(const CsrMatrix& a,
                                    const std::vector<double>& b,
                                    const IterativeOptions& opt) {
  const int n = a.rows;
  const double bnrm = norm_2(b);
  std::vector<double> x(n, 0.0);
  if (bnrm == 0.0) return x;

  // Jacobi preconditioner, applied on the right
  std::vector<double> dinv(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int k = a.ptr[i]; k < a.ptr[i + 1]; ++k)
      if (a.idx[k] == i && a.val[k] != 0.0) dinv[i] = 1.0 / a.val[k];
  for (const double d : dinv)
    if (!std::isfinite(d)) throw Breakdown("preconditioner overflow");

  const int m = std::max(1, opt.restart);
  std::vector<std::vector<double>> v;
  std::vector<double> h((m + 1) * m, 0.0);
  std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);

  int total = 0;
  double achieved = 1.0;
  while (total < opt.max_iters) {
    std::vector<double> r = a.multiply(x);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm_2(r);
    achieved = beta / bnrm;
    if (achieved <= opt.tol) return x;

    v.assign(1, r);
    for (double& vi : v[0]) vi /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    std::fill(h.begin(), h.end(), 0.0);

    int k = 0;
    for (; k < m && total < opt.max_iters; ++k, ++total) {
      std::vector<double> z(n);
      for (int i = 0; i < n; ++i) z[i] = dinv[i] * v[k][i];
      std::vector<double> w = a.multiply(z);
      for (int j = 0; j <= k; ++j) {
        const double hij = dot_v(w, v[j]);
        h[j * m + k] = hij;
        for (int i = 0; i < n; ++i) w[i] -= hij * v[j][i];
      }
      const double hkk = norm_2(w);
      h[(k + 1) * m + k] = hkk;
      if (std::isnan(hkk)) throw Breakdown("arnoldi produced NaN");

      // apply accumulated rotations to the new column
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h[j * m + k] + sn[j] * h[(j + 1) * m + k];
        h[(j + 1) * m + k] =
            -sn[j] * h[j * m + k] + cs[j] * h[(j + 1) * m + k];
        h[j * m + k] = t;
      }
      const double denom = std::hypot(h[k * m + k], hkk);
      if (denom == 0.0) throw Breakdown("gmres stagnation");
      cs[k] = h[k * m + k] / denom;
      sn[k] = hkk / denom;
      h[k * m + k] = denom;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];

      const double est = std::abs(g[k + 1]) / bnrm;
      if (hkk != 0.0) {
        v.push_back(w);
        for (double& wi : v.back()) wi /= hkk;
      }
      if (est <= 0.5 * opt.tol || hkk == 0.0) {
        ++k;
        ++total;
        break;
      }
    }

    // y = R^-1 g, x += M^-1 V y
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= h[i * m + j] * y[j];
      y[i] = s / h[i * m + i];
    }
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) x[i] += dinv[i] * v[j][i] * y[j];
  }

  std::vector<double> r = a.multiply(x);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
  achieved = norm_2(r) / bnrm;
  if (achieved <= opt.tol) return x;
  throw MaxIterations(achieved, "iterative solver hit the iteration limit");
}

namespace {

// Symmetric tridiagonal QL with implicit shifts; d holds the diagonal on
// entry and the eigenvalues on return, e the subdiagonal (e[m-1] unused),
// z an m-by-m row-major matrix whose columns become the eigenvectors
// (initialize to identity).
void tridiagonal_eig(std::vector<double>& d, std::vector<double>& e, int m,
                     std::vector<double>& z) {
  for (int l = 0; l < m; ++l) {
    int iter = 0;
    int split;
    do {
      for (split = l; split < m - 1; ++split) {
        const double dd = std::abs(d[split]) + std::abs(d[split + 1]);
        if (std::abs(e[split]) <= 1e-15 * dd) break;
      }
      if (split != l) {
        if (iter++ == 60)
          throw NotConverged("tridiagonal eigensolve stalled");
        double gg = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(gg, 1.0);
        gg = d[split] - d[l] + e[l] / (gg + (gg >= 0.0 ? r : -r));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = split - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, gg);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[split] = 0.0;
            break;
          }
          s = f / r;
          c = gg / r;
          gg = d[i + 1] - p;
          r = (d[i] - gg) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = gg + p;
          gg = c * r - b;
          for (int k = 0; k < m; ++k) {
            f = z[k * m + i + 1];
            z[k * m + i + 1] = s * z[k * m + i] + c * f;
            z[k * m + i] = c * z[k * m + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = gg;
        e[split] = 0.0;
      }
    } while (split != l);
  }
}

}  // namespace

std::pair<double, std::vector<double>> min_generalized_eig(
    const CsrMatrix& a_sym, const CsrMatrix& g, double tol, int max_iters) {
  const int n = a_sym.rows;
  SparseLu lu(a_sym);

  // Shift-invert Lanczos at shift zero: B = A^-1 G is self-adjoint in the
  // G-inner product, its extreme eigenvalue mu maps to the pencil
  // eigenvalue nearest zero via lambda = 1/mu.  Plain power iteration is
  // useless here: penalty-dominated pencils cluster around one.
  std::vector<double> start(n);
  unsigned long long state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    start[i] = ((state >> 33) & 0xffff) / 65535.0 - 0.5;
  }

  auto verify = [&](std::vector<double>& zvec)
      -> std::optional<std::pair<double, std::vector<double>>> {
    const std::vector<double> az = a_sym.multiply(zvec);
    const std::vector<double> gz = g.multiply(zvec);
    const double den = dot_v(zvec, gz);
    if (den == 0.0) return std::nullopt;
    const double lambda = dot_v(zvec, az) / den;
    double rnum = 0, na = 0, ng = 0;
    for (int i = 0; i < n; ++i) {
      const double ri = az[i] - lambda * gz[i];
      rnum += ri * ri;
      na += az[i] * az[i];
      ng += gz[i] * gz[i];
    }
    if (std::sqrt(rnum) <=
        tol * (std::sqrt(na) + std::abs(lambda) * std::sqrt(ng) + 1e-300))
      return std::make_pair(lambda, zvec);
    return std::nullopt;
  };

  const int m_cap = std::min(n, 250);
  int used = 0;
  while (used < max_iters) {
    // v: G-orthonormal Lanczos vectors, u = G v cached for inner products
    std::vector<std::vector<double>> v, u;
    std::vector<double> alpha, beta;
    {
      std::vector<double> gs = g.multiply(start);
      const double s = std::sqrt(std::abs(dot_v(start, gs)));
      if (s == 0.0) throw NotConverged("eigenprobe start vector vanished");
      for (int i = 0; i < n; ++i) {
        start[i] /= s;
        gs[i] /= s;
      }
      v.push_back(start);
      u.push_back(std::move(gs));
    }

    const double cap_scale = std::max(g.max_abs(), 1e-300);
    std::vector<double> best;
    for (int j = 0; j < m_cap && used < max_iters; ++j, ++used) {
      std::vector<double> w = lu.solve(u[j]);
      alpha.push_back(dot_v(w, u[j]));
      for (int i = 0; i < n; ++i) w[i] -= alpha[j] * v[j][i];
      if (j > 0)
        for (int i = 0; i < n; ++i) w[i] -= beta[j - 1] * v[j - 1][i];
      for (int pass = 0; pass < 2; ++pass)
        for (size_t q = 0; q < v.size(); ++q) {
          const double c = dot_v(w, u[q]);
          for (int i = 0; i < n; ++i) w[i] -= c * v[q][i];
        }
      std::vector<double> gw = g.multiply(w);
      const double bj = std::sqrt(std::abs(dot_v(w, gw)));
      const bool exhausted = bj <= 1e-13 * cap_scale;

      const int m = j + 1;
      const bool check = exhausted || j + 1 == m_cap || j % 3 == 2;
      if (check) {
        std::vector<double> d = alpha, e = beta;
        e.resize(m, 0.0);
        std::vector<double> zt(static_cast<size_t>(m) * m, 0.0);
        for (int k = 0; k < m; ++k) zt[k * m + k] = 1.0;
        tridiagonal_eig(d, e, m, zt);
        int pick = 0;
        for (int k = 1; k < m; ++k)
          if (std::abs(d[k]) > std::abs(d[pick])) pick = k;
        std::vector<double> zvec(n, 0.0);
        for (int k = 0; k < m; ++k) {
          const double s = zt[k * m + pick];
          for (int i = 0; i < n; ++i) zvec[i] += s * v[k][i];
        }
        best = zvec;
        const double ritz_bound = bj * std::abs(zt[(m - 1) * m + pick]);
        if (exhausted || ritz_bound <= tol * std::abs(d[pick]))
          if (auto hit = verify(zvec)) return *hit;
        if (exhausted) break;
      }
      beta.push_back(bj);
      for (int i = 0; i < n; ++i) {
        w[i] /= bj;
        gw[i] /= bj;
      }
      v.push_back(std::move(w));
      u.push_back(std::move(gw));
    }
    if (best.empty()) break;
    start = std::move(best);  // restart from the best Ritz vector
  }
  throw NotConverged("generalized eigenvalue iteration stalled");
}

}  // namespace dgife
