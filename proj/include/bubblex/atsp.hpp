#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <vector>

namespace bubblex::atsp {

// Cost matrices are (n+1) x (n+1): row/col 0 is the vehicle (depot), rows
// and cols 1..n are viewpoints. Column 0 is all zeros (the open-tour
// transform), so a minimum open path from the depot visiting every node is
// what both solvers return.
using Matrix = Eigen::MatrixXd;

struct Result {
  std::vector<int> order;  // node ids 1..n in visit sequence
  double cost = 0.0;
};

inline double path_cost(const Matrix& m, const std::vector<int>& order) {
  if (order.empty()) return 0.0;
  double c = m(0, order[0]);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) c += m(order[i], order[i + 1]);
  return c;
}

/// Held-Karp dynamic program over node subsets; exact minimum open path.
inline Result solve_exact(const Matrix& m) {
  const int n = static_cast<int>(m.rows()) - 1;
  Result r;
  if (n <= 0) return r;
  assert(n <= 22 && "subset DP is for small instances");
  const std::size_t full = std::size_t{1} << n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full * n, inf);
  std::vector<std::int16_t> parent(full * n, -1);
  for (int j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = m(0, j + 1);
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      const double base = dp[mask * n + j];
      if (base == inf) continue;
      for (int k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = base + m(j + 1, k + 1);
        if (cand < dp[next * n + k]) {
          dp[next * n + k] = cand;
          parent[next * n + k] = static_cast<std::int16_t>(j);
        }
      }
    }
  }
  const std::size_t all = full - 1;
  int best_end = 0;
  for (int j = 1; j < n; ++j)
    if (dp[all * n + j] < dp[all * n + best_end]) best_end = j;
  r.cost = dp[all * n + best_end];
  std::size_t mask = all;
  int j = best_end;
  std::vector<int> rev;
  while (j >= 0) {
    rev.push_back(j + 1);
    const int p = parent[mask * n + j];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  r.order.assign(rev.rbegin(), rev.rend());
  return r;
}

/// Nearest-neighbor construction followed by Or-opt segment relocation and
/// asymmetric-aware 2-opt (reversed segment costs recomputed edge by edge),
/// iterated to a local optimum. Deterministic for a given matrix.
inline Result solve_heuristic(const Matrix& m) {
  const int n = static_cast<int>(m.rows()) - 1;
  Result r;
  if (n <= 0) return r;

  std::vector<bool> used(n + 1, false);
  int cur = 0;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 1; v <= n; ++v)
      if (!used[v] && (best < 0 || m(cur, v) < m(cur, best))) best = v;
    used[best] = true;
    r.order.push_back(best);
    cur = best;
  }

  auto& p = r.order;
  const auto node_before = [&](int i) { return i == 0 ? 0 : p[i - 1]; };
  const double eps = 1e-12;
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 200) {
    improved = false;
    // Or-opt: relocate segments of length 1..3 without reversal.
    for (int len = 1; len <= 3 && !improved; ++len) {
      for (int i = 0; i + len <= n && !improved; ++i) {
        const int after_seg = (i + len < n) ? p[i + len] : -1;
        double removed = m(node_before(i), p[i]);
        for (int k = 1; k < len; ++k) removed += m(p[i + k - 1], p[i + k]);
        if (after_seg >= 0) removed += m(p[i + len - 1], after_seg);
        const double bridge = (after_seg >= 0) ? m(node_before(i), after_seg) : 0.0;
        std::vector<int> rest;
        rest.reserve(n - len);
        for (int k = 0; k < n; ++k)
          if (k < i || k >= i + len) rest.push_back(p[k]);
        for (int pos = 0; pos <= static_cast<int>(rest.size()) && !improved; ++pos) {
          if (pos == i) continue;  // same placement
          const int prev = (pos == 0) ? 0 : rest[pos - 1];
          const int next = (pos < static_cast<int>(rest.size())) ? rest[pos] : -1;
          double added = m(prev, p[i]);
          for (int k = 1; k < len; ++k) added += m(p[i + k - 1], p[i + k]);
          if (next >= 0) added += m(p[i + len - 1], next);
          const double old_bridge = (next >= 0) ? m(prev, next) : 0.0;
          if (added - old_bridge < removed - bridge - eps) {
            std::vector<int> seg(p.begin() + i, p.begin() + i + len);
            std::vector<int> np(rest.begin(), rest.begin() + pos);
            np.insert(np.end(), seg.begin(), seg.end());
            np.insert(np.end(), rest.begin() + pos, rest.end());
            p = std::move(np);
            improved = true;
          }
        }
      }
    }
    if (improved) continue;
    // 2-opt: reverse p[i..j]; asymmetric costs recomputed directly.
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n && !improved; ++j) {
        double removed = m(node_before(i), p[i]);
        for (int k = i; k < j; ++k) removed += m(p[k], p[k + 1]);
        if (j + 1 < n) removed += m(p[j], p[j + 1]);
        double added = m(node_before(i), p[j]);
        for (int k = j; k > i; --k) added += m(p[k], p[k - 1]);
        if (j + 1 < n) added += m(p[i], p[j + 1]);
        if (added < removed - eps) {
          std::reverse(p.begin() + i, p.begin() + j + 1);
          improved = true;
        }
      }
    }
  }
  r.cost = path_cost(m, p);
  return r;
}

/// Exact subset DP for small instances, local-search heuristic above.
inline Result solve(const Matrix& m, int n_exact = 13) {
  const int n = static_cast<int>(m.rows()) - 1;
  return (n <= n_exact) ? solve_exact(m) : solve_heuristic(m);
}

}  // namespace bubblex::atsp
