#include "chaincount/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chaincount {

double focal_match_cost(double p, const FocalParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("focal_match_cost: p outside [0,1]");
  }
  const double pos = -params.alpha * std::pow(1.0 - p, params.gamma) * std::log(p + params.epsilon);
  const double neg = -(1.0 - params.alpha) * std::pow(p, params.gamma) * std::log(1.0 - p + params.epsilon);
  return pos - neg;
}

CostMatrix build_value_matrix(const std::vector<Detection>& preds,
                              const std::vector<BBox>& gts,
                              const FocalParams& params) {
  CostMatrix m(preds.size(), gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double cls = focal_match_cost(preds[i].score, params);
    const Point2D c = preds[i].box.center();
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const Point2D g = gts[j].center();
      m.at(i, j) = std::abs(c.x - g.x) + std::abs(c.y - g.y) + cls;
    }
  }
  return m;
}

namespace {

CostMatrix transpose(const CostMatrix& m) {
  CostMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

// Shortest augmenting path with potentials (Jonker-Volgenant style).
// Requires rows <= cols; returns col index per row.
std::vector<std::size_t> solve_rect(const CostMatrix& a) {
  const std::size_t n = a.rows, m = a.cols;
  const double kInf = std::numeric_limits<double>::infinity();
  // 1-based helpers; p[j] = row matched to column j (0 = free).
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
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
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

MatchResult build_result(const CostMatrix& costs,
                         const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  MatchResult r;
  r.pairs = pairs;
  std::sort(r.pairs.begin(), r.pairs.end());
  std::vector<char> pred_used(costs.rows, 0), gt_used(costs.cols, 0);
  for (const auto& [i, j] : r.pairs) {
    pred_used[i] = 1;
    gt_used[j] = 1;
    r.total_cost += costs.at(i, j);
  }
  for (std::size_t i = 0; i < costs.rows; ++i)
    if (!pred_used[i]) r.unmatched_preds.push_back(i);
  for (std::size_t j = 0; j < costs.cols; ++j)
    if (!gt_used[j]) r.unmatched_gts.push_back(j);
  return r;
}

}  // namespace

MatchResult hungarian(const CostMatrix& costs) {
  if (costs.rows == 0 || costs.cols == 0) return build_result(costs, {});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (costs.rows <= costs.cols) {
    const auto row_to_col = solve_rect(costs);
    for (std::size_t i = 0; i < costs.rows; ++i) pairs.emplace_back(i, row_to_col[i]);
  } else {
    const auto col_to_row = solve_rect(transpose(costs));
    for (std::size_t j = 0; j < costs.cols; ++j) pairs.emplace_back(col_to_row[j], j);
  }
  return build_result(costs, pairs);
}

MatchResult brute_force_assignment(const CostMatrix& costs) {
  const std::size_t k = std::min(costs.rows, costs.cols);
  if (k > 8) {
    throw std::invalid_argument("brute_force_assignment: min(rows, cols) > 8");
  }
  if (k == 0) return build_result(costs, {});

  // Enumerate injections of the smaller side into the larger one.
  const bool rows_small = costs.rows <= costs.cols;
  const std::size_t small = rows_small ? costs.rows : costs.cols;
  const std::size_t large = rows_small ? costs.cols : costs.rows;

  std::vector<std::size_t> pick(small, 0), best(small, 0);
  std::vector<char> used(large, 0);
  double best_cost = std::numeric_limits<double>::infinity();

  auto entry = [&](std::size_t s, std::size_t l) {
    return rows_small ? costs.at(s, l) : costs.at(l, s);
  };
  auto recurse = [&](auto&& self, std::size_t s, double acc) -> void {
    if (s == small) {
      if (acc < best_cost) {
        best_cost = acc;
        best = pick;
      }
      return;
    }
    for (std::size_t l = 0; l < large; ++l) {
      if (used[l]) continue;
      used[l] = 1;
      pick[s] = l;
      self(self, s + 1, acc + entry(s, l));
      used[l] = 0;
    }
  };
  recurse(recurse, 0, 0.0);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t s = 0; s < small; ++s) {
    if (rows_small)
      pairs.emplace_back(s, best[s]);
    else
      pairs.emplace_back(best[s], s);
  }
  return build_result(costs, pairs);
}

}  // namespace chaincount
