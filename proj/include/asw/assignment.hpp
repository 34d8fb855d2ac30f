#pragma once

// Exact assignment minimization over a square cost matrix with forbidden entries.
//
// Costs are integers over a common denominator, so sums are exact. Two solvers:
// an exhaustive branch-and-bound that visits permutations in lexicographic order
// (first optimum found wins), and the Hungarian method combined with greedy
// fixing to recover the same lexicographically least optimal permutation.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "asw/error.hpp"
#include "asw/rational.hpp"

namespace asw {

struct CostTable {
  static constexpr long kForbidden = std::numeric_limits<long>::max();

  long denominator = 1;                 // entry value = numerator / denominator
  std::vector<std::vector<long>> cost;  // numerators, or kForbidden

  size_t size() const { return cost.size(); }
  bool forbidden(size_t i, size_t j) const { return cost[i][j] == kForbidden; }
};

struct AssignmentResult {
  Rational value;
  std::vector<int> perm;  // perm[row] = column
};

namespace detail {

// Smallest allowed entry of each row; kForbidden if a row is entirely forbidden.
inline std::vector<long> row_minima(const CostTable& c) {
  std::vector<long> out;
  for (const auto& row : c.cost) {
    long m = CostTable::kForbidden;
    for (long x : row) m = std::min(m, x);
    out.push_back(m);
  }
  return out;
}

}  // namespace detail

// Exhaustive branch-and-bound. Rows are assigned in order, columns tried in
// increasing order, and only strict improvements replace the incumbent, so the
// reported permutation is the lexicographically least optimal one.
inline AssignmentResult min_assignment_exhaustive(const CostTable& c, long node_budget = 2'000'000'000L) {
  const size_t n = c.size();
  if (n == 0) return {Rational(0), {}};
  auto mins = detail::row_minima(c);
  for (long m : mins)
    if (m == CostTable::kForbidden) throw Error(ErrorCode::kInfeasible, "a row has no allowed column");
  std::vector<long> suffix(n + 1, 0);
  for (size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + mins[i];

  long best = CostTable::kForbidden;
  std::vector<int> best_perm, perm(n, -1);
  std::vector<char> used(n, 0);
  long nodes = 0;

  std::function<void(size_t, long)> dfs = [&](size_t row, long partial) {
    if (++nodes > node_budget) throw Error(ErrorCode::kBudgetExceeded, "assignment search budget exhausted");
    if (row == n) {
      if (partial < best) {
        best = partial;
        best_perm = perm;
      }
      return;
    }
    for (size_t col = 0; col < n; ++col) {
      if (used[col] || c.forbidden(row, col)) continue;
      long next = partial + c.cost[row][col];
      if (best != CostTable::kForbidden && next + suffix[row + 1] >= best) continue;
      used[col] = 1;
      perm[row] = static_cast<int>(col);
      dfs(row + 1, next);
      used[col] = 0;
    }
  };
  dfs(0, 0);
  if (best == CostTable::kForbidden) throw Error(ErrorCode::kInfeasible, "every permutation hits a forbidden entry");
  return {make_rational(best, c.denominator), best_perm};
}

namespace detail {

// Hungarian method (potentials, O(n^3)) on integer costs; forbidden entries get a
// penalty larger than any feasible total. Returns the optimal total and perm.
inline std::pair<long, std::vector<int>> hungarian(const std::vector<std::vector<long>>& a, long penalty) {
  const size_t n = a.size();
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<long> u(n + 1, 0), v(n + 1, 0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  auto at = [&](size_t i, size_t j) { return a[i][j] == CostTable::kForbidden ? penalty : a[i][j]; };
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<long> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      size_t i0 = p[j0], j1 = 0;
      long delta = inf;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        long cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(n, -1);
  long total = 0;
  for (size_t j = 1; j <= n; ++j) perm[p[j] - 1] = static_cast<int>(j - 1);
  for (size_t i = 0; i < n; ++i) total += at(i, static_cast<size_t>(perm[i]));
  return {total, perm};
}

inline long feasibility_penalty(const CostTable& c) {
  long maxc = 0;
  for (const auto& row : c.cost)
    for (long x : row)
      if (x != CostTable::kForbidden) maxc = std::max(maxc, x);
  return (maxc + 1) * static_cast<long>(c.size() + 1);
}

}  // namespace detail

// Hungarian optimum plus greedy fixing of rows to the smallest column that keeps
// the optimum attainable (yields the lexicographically least optimal permutation).
inline AssignmentResult min_assignment_hungarian(const CostTable& c) {
  const size_t n = c.size();
  if (n == 0) return {Rational(0), {}};
  const long penalty = detail::feasibility_penalty(c);
  auto [opt, perm0] = detail::hungarian(c.cost, penalty);
  if (opt >= penalty) throw Error(ErrorCode::kInfeasible, "every permutation hits a forbidden entry");

  std::vector<int> perm(n, -1);
  std::vector<size_t> rows, cols;
  for (size_t i = 0; i < n; ++i) cols.push_back(i);
  long fixed = 0;
  for (size_t r = 0; r < n; ++r) {
    bool placed = false;
    for (size_t ci = 0; ci < cols.size() && !placed; ++ci) {
      size_t col = cols[ci];
      if (c.forbidden(r, col)) continue;
      // Optimal completion of rows r+1.. over the remaining columns.
      std::vector<size_t> rest_cols;
      for (size_t cj = 0; cj < cols.size(); ++cj)
        if (cj != ci) rest_cols.push_back(cols[cj]);
      long rest = 0;
      if (!rest_cols.empty()) {
        std::vector<std::vector<long>> sub;
        for (size_t rr = r + 1; rr < n; ++rr) {
          std::vector<long> row;
          for (size_t col2 : rest_cols) row.push_back(c.cost[rr][col2]);
          sub.push_back(row);
        }
        rest = detail::hungarian(sub, penalty).first;
        if (rest >= penalty) continue;
      }
      if (fixed + c.cost[r][col] + rest == opt) {
        perm[r] = static_cast<int>(col);
        fixed += c.cost[r][col];
        cols.erase(cols.begin() + static_cast<long>(ci));
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorCode::kInfeasible, "greedy fixing failed");
  }
  return {make_rational(opt, c.denominator), perm};
}

// Visit every allowed permutation whose total equals target (numerator units).
// Costs must be nonnegative. Returns the number of permutations visited.
inline long enumerate_at_level(const CostTable& c, long target,
                               const std::function<void(const std::vector<int>&)>& visit,
                               long node_budget = 2'000'000'000L) {
  const size_t n = c.size();
  auto mins = detail::row_minima(c);
  for (long m : mins)
    if (m == CostTable::kForbidden) return 0;
  std::vector<long> suffix(n + 1, 0);
  for (size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + mins[i];
  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);
  long nodes = 0, found = 0;
  std::function<void(size_t, long)> dfs = [&](size_t row, long partial) {
    if (++nodes > node_budget) throw Error(ErrorCode::kBudgetExceeded, "level enumeration budget exhausted");
    if (row == n) {
      if (partial == target) {
        ++found;
        visit(perm);
      }
      return;
    }
    for (size_t col = 0; col < n; ++col) {
      if (used[col] || c.forbidden(row, col)) continue;
      long next = partial + c.cost[row][col];
      if (next + suffix[row + 1] > target) continue;
      used[col] = 1;
      perm[row] = static_cast<int>(col);
      dfs(row + 1, next);
      used[col] = 0;
    }
  };
  dfs(0, 0);
  return found;
}

// Sign of a permutation given as perm[i] = image of i.
inline int permutation_sign(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  int sign = 1;
  for (size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    size_t len = 0;
    for (size_t j = i; !seen[j]; j = static_cast<size_t>(perm[j])) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace asw
