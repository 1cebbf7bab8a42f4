#include "nearlap/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace nearlap {

SolverError::SolverError(std::size_t row, const std::string& what)
    : Error("row " + std::to_string(row + 1) + ": " + what), row_(row) {}

// ---------------------------------------------------------------------------
// GraphStructure

GraphStructure::GraphStructure(std::size_t n, const std::vector<std::vector<Index>>& neighbors,
                               std::vector<bool> has_self_loop)
    : has_self_loop_(std::move(has_self_loop)) {
  if (neighbors.size() != n) throw InputError("neighbor list count differs from n");
  if (has_self_loop_.empty()) has_self_loop_.assign(n, false);
  if (has_self_loop_.size() != n) throw InputError("self-loop flag count differs from n");

  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + neighbors[i].size();
  targets_.reserve(offsets_[n]);

  std::unordered_set<Index> seen;
  for (std::size_t i = 0; i < n; ++i) {
    seen.clear();
    for (Index j : neighbors[i]) {
      if (j >= n) {
        throw InputError("neighbor " + std::to_string(j + 1) + " of node " +
                         std::to_string(i + 1) + " out of range");
      }
      if (j == i) throw InputError("node " + std::to_string(i + 1) + " lists itself as neighbor");
      if (!seen.insert(j).second) {
        throw InputError("duplicate edge " + std::to_string(i + 1) + " -> " +
                         std::to_string(j + 1));
      }
      targets_.push_back(j);
    }
  }
}

GraphStructure GraphStructure::from_edges(std::size_t n,
                                          std::span<const std::pair<Index, Index>> edges) {
  std::vector<std::vector<Index>> adj(n);
  std::vector<bool> loops(n, false);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) throw InputError("edge endpoint out of range");
    if (i == j) {
      if (loops[i]) throw InputError("duplicate self-loop on node " + std::to_string(i + 1));
      loops[i] = true;
    } else {
      adj[i].push_back(j);
    }
  }
  return GraphStructure(n, adj, std::move(loops));
}

std::size_t GraphStructure::max_degree() const noexcept {
  std::size_t m = 0;
  for (std::size_t i = 0; i < n(); ++i) m = std::max(m, degree(i));
  return m;
}

std::size_t GraphStructure::self_loop_count() const noexcept {
  return static_cast<std::size_t>(std::count(has_self_loop_.begin(), has_self_loop_.end(), true));
}

GraphStructure GraphStructure::without_self_loops() const {
  GraphStructure g = *this;
  g.has_self_loop_.assign(n(), false);
  return g;
}

GraphStructure GraphStructure::with_self_loops(std::vector<bool> flags) const {
  if (flags.size() != n()) throw InputError("self-loop flag count differs from n");
  GraphStructure g = *this;
  g.has_self_loop_ = std::move(flags);
  return g;
}

std::ptrdiff_t GraphStructure::find(std::size_t i, std::size_t j) const {
  auto nb = neighbors(i);
  auto it = std::find(nb.begin(), nb.end(), static_cast<Index>(j));
  return it == nb.end() ? -1 : it - nb.begin();
}

// ---------------------------------------------------------------------------
// SparseRowMatrix

SparseRowMatrix::SparseRowMatrix(const GraphStructure& g)
    : offsets_(g.offsets().begin(), g.offsets().end()),
      cols_(),
      diag_(g.n(), 0.0),
      values_(g.edge_count(), 0.0) {
  cols_.reserve(g.edge_count());
  for (std::size_t i = 0; i < g.n(); ++i) {
    auto nb = g.neighbors(i);
    cols_.insert(cols_.end(), nb.begin(), nb.end());
  }
}

double SparseRowMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return diag_[i];
  auto c = cols(i);
  auto it = std::find(c.begin(), c.end(), static_cast<Index>(j));
  return it == c.end() ? 0.0 : values_[offsets_[i] + (it - c.begin())];
}

void SparseRowMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= n() || j >= n()) throw InputError("entry index out of range");
  if (i == j) {
    diag_[i] = v;
    return;
  }
  auto c = cols(i);
  auto it = std::find(c.begin(), c.end(), static_cast<Index>(j));
  if (it == c.end()) {
    throw InputError("entry (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                     ") lies outside the graph pattern");
  }
  values_[offsets_[i] + (it - c.begin())] = v;
}

bool SparseRowMatrix::matches(const GraphStructure& g) const noexcept {
  if (g.n() != n() || g.edge_count() != values_.size()) return false;
  if (!std::equal(offsets_.begin(), offsets_.end(), g.offsets().begin(), g.offsets().end()))
    return false;
  for (std::size_t i = 0; i < n(); ++i) {
    auto a = cols(i);
    auto b = g.neighbors(i);
    if (!std::equal(a.begin(), a.end(), b.begin(), b.end())) return false;
  }
  return true;
}

void SparseRowMatrix::require_pattern(const GraphStructure& g) const {
  if (!matches(g)) throw InputError("matrix pattern does not match the graph structure");
}

bool SparseRowMatrix::all_finite() const noexcept {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(diag_.begin(), diag_.end(), finite) &&
         std::all_of(values_.begin(), values_.end(), finite);
}

std::vector<double> SparseRowMatrix::to_dense() const {
  const std::size_t nn = n();
  std::vector<double> out(nn * nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    out[i * nn + i] = diag_[i];
    auto c = cols(i);
    auto v = row(i);
    for (std::size_t k = 0; k < c.size(); ++k) out[i * nn + c[k]] = v[k];
  }
  return out;
}

namespace {
template <class Op>
void for_each_slot_pair(const SparseRowMatrix& a, const SparseRowMatrix& b, Op op) {
  if (a.n() != b.n() || a.values().size() != b.values().size())
    throw InputError("matrices have different patterns");
  for (std::size_t i = 0; i < a.n(); ++i) op(a.diag(i), b.diag(i));
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t k = 0; k < va.size(); ++k) op(va[k], vb[k]);
}
}  // namespace

double squared_distance(const SparseRowMatrix& a, const SparseRowMatrix& b) {
  double s = 0.0;
  for_each_slot_pair(a, b, [&](double x, double y) { s += (x - y) * (x - y); });
  return s;
}

double max_abs_difference(const SparseRowMatrix& a, const SparseRowMatrix& b) {
  double m = 0.0;
  for_each_slot_pair(a, b, [&](double x, double y) { m = std::max(m, std::abs(x - y)); });
  return m;
}

// ---------------------------------------------------------------------------
// Q-algebra

void apply_q(std::span<const double> v, std::span<double> out) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = 2.0 * v[k] + 2.0 * s;
}

std::vector<double> apply_q(std::span<const double> v) {
  std::vector<double> out(v.size());
  apply_q(v, out);
  return out;
}

void apply_q_inverse(std::span<const double> v, std::span<double> out) {
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  const double shift = s / (2.0 * (1.0 + static_cast<double>(v.size())));
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = 0.5 * v[k] - shift;
}

std::vector<double> apply_q_inverse(std::span<const double> v) {
  std::vector<double> out(v.size());
  apply_q_inverse(v, out);
  return out;
}

std::vector<double> unconstrained_minimizer(std::span<const double> b) {
  auto out = apply_q_inverse(b);
  for (double& v : out) v = -v;
  return out;
}

void fill_row_subproblem(const SparseRowMatrix& a, std::size_t i, std::span<double> b) {
  const double two_diag = 2.0 * a.diag(i);
  auto r = a.row(i);
  for (std::size_t k = 0; k < r.size(); ++k) b[k] = two_diag - 2.0 * r[k];
}

RowSubproblem build_row_subproblem(const SparseRowMatrix& a, const GraphStructure& g,
                                   std::size_t i) {
  if (i >= g.n() || i >= a.n()) throw InputError("row index out of range");
  RowSubproblem p;
  p.b.resize(g.degree(i));
  if (a.row(i).size() != p.b.size()) throw InputError("matrix pattern does not match the graph");
  fill_row_subproblem(a, i, p.b);
  return p;
}

double objective(std::span<const double> x, std::span<const double> b) {
  if (x.size() != b.size()) throw InputError("objective: length mismatch");
  // ½xᵀ(2I + 2J)x = ‖x‖² + (Σx)²
  double sq = 0.0, sum = 0.0, lin = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sq += x[k] * x[k];
    sum += x[k];
    lin += b[k] * x[k];
  }
  return sq + sum * sum + lin;
}

double objective(std::span<const double> x, const RowSubproblem& p) { return objective(x, p.b); }

double kkt_residual(std::span<const double> x, std::span<const double> lambda,
                    std::span<const double> b) {
  if (x.size() != b.size() || lambda.size() != b.size())
    throw InputError("kkt_residual: length mismatch");
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  double r = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double grad = 2.0 * x[k] + 2.0 * s + b[k] + lambda[k];
    r = std::max({r, std::abs(grad), x[k], -lambda[k]});
    comp += x[k] * lambda[k];
  }
  return std::max(r, std::abs(comp));
}

double kkt_residual(std::span<const double> x, std::span<const double> lambda,
                    const RowSubproblem& p) {
  return kkt_residual(x, lambda, p.b);
}

LaplacianCertificate validate_laplacian(const SparseRowMatrix& l, const GraphStructure& g,
                                        bool loopy) {
  l.require_pattern(g);
  LaplacianCertificate cert;
  cert.loopy = loopy;
  for (std::size_t i = 0; i < g.n(); ++i) {
    double sum = l.diag(i);
    cert.max_sign_violation = std::max(cert.max_sign_violation, -l.diag(i));
    for (double v : l.row(i)) {
      cert.max_sign_violation = std::max(cert.max_sign_violation, v);
      sum += v;
    }
    const double viol = (loopy && g.has_self_loop(i)) ? std::max(0.0, -sum) : std::abs(sum);
    cert.max_row_sum_violation = std::max(cert.max_row_sum_violation, viol);
  }
  return cert;
}

}  // namespace nearlap
