// Finite solvers: free-set shrinking active set, sort-based KKT point, and the
// 2^d enumeration oracle.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "row_kernels.hpp"

namespace nearlap {
namespace detail {

RowStats active_set_kernel(std::span<const double> b, std::span<double> x, RowWorkspace& ws,
                           std::vector<std::vector<Index>>* active_history) {
  const std::size_t d = b.size();
  auto& free = ws.idx0;
  auto& next = ws.idx1;
  auto& y = ws.v0;
  free.resize(d);
  std::iota(free.begin(), free.end(), Index{0});
  y.resize(d);
  std::fill(x.begin(), x.end(), 0.0);

  RowStats stats;
  std::vector<Index> active;
  while (!free.empty()) {
    // y = −Q_|F|⁻¹ b_F = ½(S_F/(1+|F|) − b_F)
    double s = 0.0;
    for (Index i : free) s += b[i];
    const double c = s / (1.0 + static_cast<double>(free.size()));
    next.clear();
    for (Index i : free) {
      y[i] = 0.5 * (c - b[i]);
      if (!(y[i] > 0.0)) next.push_back(i);
    }
    if (next.size() == free.size()) {
      for (Index i : free) x[i] = y[i];
      break;
    }
    if (active_history) {
      for (Index i : free)
        if (y[i] > 0.0) active.push_back(i);
      std::vector<Index> snapshot = active;
      std::sort(snapshot.begin(), snapshot.end());
      active_history->push_back(std::move(snapshot));
    }
    free.swap(next);
    ++stats.iterations;
  }
  stats.free_count = free.size();
  return stats;
}

namespace {

// Stable descending argsort of b into ws.idx0, with the sorted keys in ws.v0.
// Below the cutoff, insertion sort on contiguous keys is fastest; above it,
// (value, index) pairs are sorted with the index as tie-break, which gives
// the stable order without std::stable_sort's temporary buffer.
void argsort_descending(std::span<const double> b, RowWorkspace& ws) {
  const std::size_t d = b.size();
  auto& order = ws.idx0;
  auto& keys = ws.v0;
  order.resize(d);
  keys.resize(d);
  if (d <= 32) {
    for (std::size_t j = 0; j < d; ++j) {
      const double key = b[j];
      std::size_t k = j;
      while (k > 0 && keys[k - 1] < key) {
        keys[k] = keys[k - 1];
        order[k] = order[k - 1];
        --k;
      }
      keys[k] = key;
      order[k] = static_cast<Index>(j);
    }
    return;
  }
  auto& pairs = ws.pairs;
  pairs.resize(d);
  for (std::size_t j = 0; j < d; ++j) pairs[j] = {b[j], static_cast<Index>(j)};
  std::sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
    return p.first > q.first || (p.first == q.first && p.second < q.second);
  });
  for (std::size_t j = 0; j < d; ++j) {
    keys[j] = pairs[j].first;
    order[j] = pairs[j].second;
  }
}

// k₀ and S_{k₀} over keys sorted descending.
std::pair<std::size_t, double> scan_cut(std::span<const double> sorted) {
  double s = 0.0;
  std::size_t k0 = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const double bj = sorted[j];
    const double s_next = s + bj;
    if (bj < s_next / static_cast<double>(j + 2)) break;
    s = s_next;
    k0 = j + 1;
  }
  return {k0, s};
}

}  // namespace

RowStats sort_kkt_kernel(std::span<const double> b, std::span<double> x, RowWorkspace& ws) {
  argsort_descending(b, ws);
  const auto [k0, s] = scan_cut(ws.v0);
  const double c = s / (1.0 + static_cast<double>(k0));
  std::fill(x.begin(), x.end(), 0.0);
  for (std::size_t j = 0; j < k0; ++j) x[ws.idx0[j]] = 0.5 * (c - ws.v0[j]);
  ws.idx0.resize(k0);
  return RowStats{1, k0, true};
}

void complete_solution(std::span<const double> b, RowSolution& sol,
                       std::span<const Index> free_set) {
  const std::size_t d = b.size();
  std::vector<bool> is_free(d, false);
  for (Index i : free_set) is_free[i] = true;
  const double s = std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
  sol.lambda.assign(d, 0.0);
  sol.free_set.clear();
  sol.active_set.clear();
  for (std::size_t i = 0; i < d; ++i) {
    if (is_free[i]) {
      sol.free_set.push_back(static_cast<Index>(i));
    } else {
      sol.active_set.push_back(static_cast<Index>(i));
      sol.lambda[i] = -(2.0 * sol.x[i] + 2.0 * s + b[i]);
    }
  }
  sol.objective = objective(sol.x, b);
}

}  // namespace detail

RowSolution solve_active_set(const RowSubproblem& p,
                             std::vector<std::vector<Index>>* active_history) {
  RowWorkspace ws;
  RowSolution sol;
  sol.x.resize(p.d());
  const RowStats st = detail::active_set_kernel(p.b, sol.x, ws, active_history);
  sol.iterations = st.iterations;
  detail::complete_solution(p.b, sol, ws.idx0);
  return sol;
}

RowSolution solve_sort_kkt(const RowSubproblem& p) {
  RowWorkspace ws;
  RowSolution sol;
  sol.x.resize(p.d());
  const RowStats st = detail::sort_kkt_kernel(p.b, sol.x, ws);
  sol.iterations = st.iterations;
  detail::complete_solution(p.b, sol, ws.idx0);
  return sol;
}

std::size_t sort_kkt_cut(std::span<const double> b) {
  RowWorkspace ws;
  detail::argsort_descending(b, ws);
  return detail::scan_cut(ws.v0).first;
}

namespace {

// Solves M z = r in place for symmetric positive definite M (k×k, row-major)
// by Cholesky.
void cholesky_solve(std::vector<double>& m, std::vector<double>& r, std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) {
    double diag = m[j * k + j];
    for (std::size_t p = 0; p < j; ++p) diag -= m[j * k + p] * m[j * k + p];
    if (!(diag > 0.0)) throw Error("enumerate_active_sets: reduced Q not positive definite");
    const double ljj = std::sqrt(diag);
    m[j * k + j] = ljj;
    for (std::size_t i = j + 1; i < k; ++i) {
      double v = m[i * k + j];
      for (std::size_t p = 0; p < j; ++p) v -= m[i * k + p] * m[j * k + p];
      m[i * k + j] = v / ljj;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    double v = r[i];
    for (std::size_t p = 0; p < i; ++p) v -= m[i * k + p] * r[p];
    r[i] = v / m[i * k + i];
  }
  for (std::size_t i = k; i-- > 0;) {
    double v = r[i];
    for (std::size_t p = i + 1; p < k; ++p) v -= m[p * k + i] * r[p];
    r[i] = v / m[i * k + i];
  }
}

}  // namespace

RowSolution enumerate_active_sets(const RowSubproblem& p) {
  const std::size_t d = p.d();
  if (d > kMaxEnumerationDimension) {
    throw DimensionTooLarge("enumerate_active_sets: d = " + std::to_string(d) +
                            " exceeds " + std::to_string(kMaxEnumerationDimension));
  }
  double scale = 1.0;
  for (double v : p.b) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * scale;

  std::optional<RowSolution> best;
  std::vector<Index> free;
  std::vector<double> m, r, x(d), lambda(d);
  const std::uint64_t subsets = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {  // bit set = active
    free.clear();
    for (std::size_t i = 0; i < d; ++i)
      if (!((mask >> i) & 1u)) free.push_back(static_cast<Index>(i));
    const std::size_t k = free.size();
    m.assign(k * k, 2.0);
    for (std::size_t i = 0; i < k; ++i) m[i * k + i] = 4.0;
    r.resize(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = -p.b[free[i]];
    if (k > 0) cholesky_solve(m, r, k);

    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) x[free[i]] = r[i];
    double s = 0.0;
    for (double v : x) s += v;
    bool feasible = true;
    for (std::size_t i = 0; i < d && feasible; ++i) {
      const bool active = (mask >> i) & 1u;
      // Dense stationarity: (Qx)_i = 4x_i + 2Σ_{j≠i} x_j.
      lambda[i] = active ? -(4.0 * x[i] + 2.0 * (s - x[i]) + p.b[i]) : 0.0;
      if (x[i] > tol || lambda[i] < -tol) feasible = false;
    }
    if (!feasible) continue;
    // Ties (degenerate zeros) admit several certificates; keep the one with the
    // largest free set, which is what the finite solvers report.
    if (best && best->free_set.size() >= k) continue;
    RowSolution sol;
    sol.x = x;
    sol.lambda = lambda;
    sol.free_set = free;
    for (std::size_t i = 0; i < d; ++i)
      if ((mask >> i) & 1u) sol.active_set.push_back(static_cast<Index>(i));
    sol.objective = objective(sol.x, p.b);
    sol.iterations = static_cast<std::size_t>(mask + 1);
    best = std::move(sol);
  }
  if (!best) throw Error("enumerate_active_sets: no KKT certificate found");
  best->iterations = static_cast<std::size_t>(subsets);
  return std::move(*best);
}

}  // namespace nearlap
