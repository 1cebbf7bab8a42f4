#pragma once

// Test-only reference computations. Nothing here shares code with the
// library's O(d) algebra: matrices are formed densely and solved by Gaussian
// elimination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense explicit_q(std::size_t d) {
  Dense q(d, std::vector<double>(d, 2.0));
  for (std::size_t i = 0; i < d; ++i) q[i][i] = 4.0;
  return q;
}

inline std::vector<double> matvec(const Dense& m, const std::vector<double>& v) {
  std::vector<double> out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

/// Solves m·x = rhs with partial pivoting; nullopt when (numerically) singular.
inline std::optional<std::vector<double>> solve(Dense m, std::vector<double> rhs) {
  const std::size_t n = m.size();
  double scale = 0.0;
  for (const auto& r : m)
    for (double v : r) scale = std::max(scale, std::abs(v));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) <= 1e-12 * std::max(scale, 1.0)) return std::nullopt;
    std::swap(m[c], m[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t c = n; c-- > 0;) {
    double s = rhs[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= m[c][k] * x[k];
    x[c] = s / m[c][c];
  }
  return x;
}

/// ½xᵀQx + bᵀx with Q formed explicitly.
inline double dense_objective(const std::vector<double>& x, const std::vector<double>& b) {
  const auto qx = matvec(explicit_q(x.size()), x);
  double f = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) f += 0.5 * x[k] * qx[k] + b[k] * x[k];
  return f;
}

/// Euclidean projection of `a` onto {z : c_k·z ≤ 0 for inequality rows,
/// c_k·z = 0 for equality rows} by enumerating which inequalities are tight.
/// Each candidate is z = a − Cᵀμ with C C ᵀμ = C a over the tight rows; the
/// feasible candidate closest to `a` is the projection.
inline std::vector<double> project_polyhedral_cone(const std::vector<double>& a,
                                                   const Dense& ineq, const Dense& eq) {
  const std::size_t m = ineq.size();
  if (m > 24) throw std::invalid_argument("too many constraints for enumeration");
  std::vector<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  double amax = 1.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  const double tol = 1e-11 * amax;

  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    Dense c = eq;
    for (std::size_t k = 0; k < m; ++k)
      if (mask >> k & 1) c.push_back(ineq[k]);
    std::vector<double> z = a;
    if (!c.empty()) {
      Dense g(c.size(), std::vector<double>(c.size(), 0.0));
      std::vector<double> ca(c.size(), 0.0);
      for (std::size_t r = 0; r < c.size(); ++r) {
        for (std::size_t s = 0; s < c.size(); ++s)
          for (std::size_t t = 0; t < a.size(); ++t) g[r][s] += c[r][t] * c[s][t];
        for (std::size_t t = 0; t < a.size(); ++t) ca[r] += c[r][t] * a[t];
      }
      auto mu = solve(g, ca);
      if (!mu) continue;
      for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t t = 0; t < a.size(); ++t) z[t] -= (*mu)[r] * c[r][t];
    }
    bool feasible = true;
    for (const auto& row : ineq) {
      double v = 0.0;
      for (std::size_t t = 0; t < a.size(); ++t) v += row[t] * z[t];
      if (v > tol) feasible = false;
    }
    for (const auto& row : eq) {
      double v = 0.0;
      for (std::size_t t = 0; t < a.size(); ++t) v += row[t] * z[t];
      if (std::abs(v) > tol) feasible = false;
    }
    if (!feasible) continue;
    double dist = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) dist += (z[t] - a[t]) * (z[t] - a[t]);
    if (dist < best_dist) {
      best_dist = dist;
      best = z;
    }
  }
  if (best.empty()) throw std::runtime_error("no feasible candidate");
  return best;
}

/// Nearest Laplacian row, returned as (diagonal, neighbor entries...).
/// Variables z = (l_ii, l_1..l_d): l_ii ≥ 0, l_k ≤ 0, and either Σz = 0
/// (no self-loop) or Σz ≥ 0 (self-loop).
inline std::vector<double> nearest_row(double a_ii, const std::vector<double>& a_nb,
                                       bool self_loop) {
  const std::size_t d = a_nb.size();
  std::vector<double> a{a_ii};
  a.insert(a.end(), a_nb.begin(), a_nb.end());
  Dense ineq, eq;
  std::vector<double> row(d + 1, 0.0);
  row[0] = -1.0;
  ineq.push_back(row);
  for (std::size_t k = 0; k < d; ++k) {
    std::fill(row.begin(), row.end(), 0.0);
    row[k + 1] = 1.0;
    ineq.push_back(row);
  }
  std::fill(row.begin(), row.end(), -1.0);
  if (self_loop)
    ineq.push_back(row);
  else
    eq.push_back(row);
  return project_polyhedral_cone(a, ineq, eq);
}

}  // namespace oracle
