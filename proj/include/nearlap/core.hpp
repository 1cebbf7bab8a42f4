#pragma once

// Domain types shared by every solver: the fixed graph structure, row-sparse
// matrices living on that structure, the per-row bound-constrained QP and its
// solution, and the feasibility/KKT validators.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nearlap {

using Index = std::uint32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad index, pattern mismatch, unparsable file.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds what an operation supports (enumeration, worst case).
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

/// A row solve failed; `row()` names the offending row.
class SolverError : public Error {
 public:
  SolverError(std::size_t row, const std::string& what);
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Directed graph (V, E) without multiedges. Out-neighbors are stored in CSR
/// form; self-loops are kept apart as per-node flags so that `neighbors(i)`
/// never contains `i`.
class GraphStructure {
 public:
  GraphStructure() = default;

  /// Validates the invariants and throws InputError on violation.
  GraphStructure(std::size_t n, const std::vector<std::vector<Index>>& neighbors,
                 std::vector<bool> has_self_loop = {});

  /// Builds from a directed edge list; (i, i) marks a self-loop. Neighbor
  /// order is the order edges appear.
  static GraphStructure from_edges(std::size_t n,
                                   std::span<const std::pair<Index, Index>> edges);

  std::size_t n() const noexcept { return has_self_loop_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }
  std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t max_degree() const noexcept;
  std::size_t self_loop_count() const noexcept;
  std::size_t row_offset(std::size_t i) const { return offsets_[i]; }
  bool has_self_loop(std::size_t i) const { return has_self_loop_[i]; }
  bool has_self_loops() const noexcept { return self_loop_count() > 0; }

  std::span<const Index> neighbors(std::size_t i) const {
    return {targets_.data() + offsets_[i], degree(i)};
  }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }

  /// Same edges, all self-loop flags cleared.
  GraphStructure without_self_loops() const;
  GraphStructure with_self_loops(std::vector<bool> flags) const;

  /// Position of j within neighbors(i), or -1.
  std::ptrdiff_t find(std::size_t i, std::size_t j) const;

  friend bool operator==(const GraphStructure&, const GraphStructure&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> targets_;
  std::vector<bool> has_self_loop_;
};

/// Row-major sparse matrix restricted to a graph pattern plus the diagonal.
/// Entries outside the pattern are implicitly zero.
class SparseRowMatrix {
 public:
  SparseRowMatrix() = default;
  /// Zero matrix on the pattern of `g`.
  explicit SparseRowMatrix(const GraphStructure& g);

  std::size_t n() const noexcept { return diag_.size(); }
  std::size_t nonzero_slots() const noexcept { return values_.size() + diag_.size(); }

  double diag(std::size_t i) const { return diag_[i]; }
  double& diag(std::size_t i) { return diag_[i]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<double> row(std::size_t i) {
    return {values_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const Index> cols(std::size_t i) const {
    return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  std::span<const double> diagonal() const noexcept { return diag_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Entry (i, j); zero outside the pattern.
  double at(std::size_t i, std::size_t j) const;
  /// Throws InputError if (i, j) is outside pattern ∪ diagonal.
  void set(std::size_t i, std::size_t j, double v);

  bool matches(const GraphStructure& g) const noexcept;
  void require_pattern(const GraphStructure& g) const;
  bool all_finite() const noexcept;

  /// Row-major dense copy, n*n entries.
  std::vector<double> to_dense() const;

  friend bool operator==(const SparseRowMatrix&, const SparseRowMatrix&) = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> cols_;
  std::vector<double> diag_;
  std::vector<double> values_;
};

/// ‖A − B‖²_F over the common pattern ∪ diagonal.
double squared_distance(const SparseRowMatrix& a, const SparseRowMatrix& b);
/// max |A_ij − B_ij| over the common pattern ∪ diagonal.
double max_abs_difference(const SparseRowMatrix& a, const SparseRowMatrix& b);

struct LaplacianCertificate {
  double max_sign_violation = 0.0;
  double max_row_sum_violation = 0.0;
  bool loopy = false;

  bool ok(double tol = 1e-9) const noexcept {
    return max_sign_violation <= tol && max_row_sum_violation <= tol;
  }
};

/// Problem data for one row: minimize ½xᵀQ_d x + bᵀx subject to x ≤ 0, with
/// Q_d = 2I + 2J implicit.
struct RowSubproblem {
  std::vector<double> b;

  std::size_t d() const noexcept { return b.size(); }
};

/// One iteration of an iterative solver: objective at the iterate and the
/// solver's own stopping measure (duality gap, objective gap, or residual).
struct TraceEntry {
  double objective = 0.0;
  double measure = 0.0;
};

struct RowSolution {
  std::vector<double> x;
  std::vector<double> lambda;
  std::vector<Index> free_set;
  std::vector<Index> active_set;
  double objective = 0.0;
  std::size_t iterations = 0;
  /// False when an iterative solver hit its cap; x is then the best iterate.
  bool converged = true;
  /// Interior point only: the unclamped final iterate.
  std::vector<double> raw_x;
  /// Filled when the solver is asked to record one.
  std::vector<TraceEntry> trace;
};

// Q-algebra. All O(d); Q is never materialized.

/// out = Q_d v = 2v + 2(Σv)1.
void apply_q(std::span<const double> v, std::span<double> out);
std::vector<double> apply_q(std::span<const double> v);

/// out = Q_d⁻¹ v = ½v − (Σv)/(2(1+d))·1.
void apply_q_inverse(std::span<const double> v, std::span<double> out);
std::vector<double> apply_q_inverse(std::span<const double> v);

/// b′ = −Q_d⁻¹ b, the unconstrained minimizer.
std::vector<double> unconstrained_minimizer(std::span<const double> b);

RowSubproblem build_row_subproblem(const SparseRowMatrix& a, const GraphStructure& g,
                                   std::size_t i);
/// Writes b for row i into `b` (size degree(i)); no pattern check.
void fill_row_subproblem(const SparseRowMatrix& a, std::size_t i, std::span<double> b);

double objective(std::span<const double> x, const RowSubproblem& p);
double objective(std::span<const double> x, std::span<const double> b);

/// max(‖Qx + b + λ‖_∞, max(x)_+, max(−λ)_+, |xᵀλ|).
double kkt_residual(std::span<const double> x, std::span<const double> lambda,
                    const RowSubproblem& p);
double kkt_residual(std::span<const double> x, std::span<const double> lambda,
                    std::span<const double> b);

/// Sign and row-sum violations. Loop-less rows (and every row when `loopy` is
/// false) must sum to zero; with `loopy`, self-loop rows need a nonnegative sum.
LaplacianCertificate validate_laplacian(const SparseRowMatrix& l, const GraphStructure& g,
                                        bool loopy);

}  // namespace nearlap
