#pragma once

// Row-subproblem solvers and the full-matrix loop-less projection driver.
//
// Every row of the nearest-Laplacian problem is the bound-constrained QP
//   minimize ½xᵀQ_d x + bᵀx  subject to x ≤ 0,   Q_d = 2I + 2J,
// and rows are independent. Two solvers are exact and finite (active set,
// sort-based KKT), two are iterative (primal-dual interior point, V-FISTA),
// and the subset enumeration is kept as an independent oracle.

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nearlap/core.hpp"

namespace nearlap {

enum class Method { active_set, sort_kkt, interior_point, vfista };

std::string_view method_name(Method m);
/// Accepts canonical names plus the short CLI spelling "ip".
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::active_set, Method::sort_kkt,
                                         Method::interior_point, Method::vfista};

enum class VfistaStop {
  /// ‖x − Π(x − ∇f(x)/β)‖_∞ ≤ ε; no reference value needed.
  residual,
  /// F(x) − f_ref < ε with f_ref supplied (drivers compute it by sort-KKT).
  reference,
};

struct SolverConfig {
  double ip_epsilon = 1e-6;
  double ip_alpha = 1.0;
  double ip_rho = 0.9;
  double ip_sigma = 0.5;
  /// 0 selects 10·d + 200.
  std::size_t ip_max_iter = 0;

  double vfista_epsilon = 1e-6;
  /// 0 selects a cap derived from the linear rate, see vfista_iteration_cap().
  std::size_t vfista_max_iter = 0;
  /// 0 selects λ_max(Q_d) = 2 + 2d per row.
  double vfista_beta = 0.0;
  double vfista_sigma = 2.0;
  VfistaStop vfista_stop = VfistaStop::residual;

  bool record_trace = false;

  /// Throws InputError when a parameter is out of range.
  void validate() const;

  std::size_t ip_iteration_cap(std::size_t d) const;
  std::size_t vfista_iteration_cap(std::size_t d) const;
};

/// Reusable scratch buffers for the row kernels, one per thread.
struct RowWorkspace {
  std::vector<double> b, xref;
  std::vector<double> v0, v1, v2, v3, v4, v5;
  std::vector<Index> idx0, idx1;
  std::vector<std::pair<double, Index>> pairs;
};

struct RowStats {
  std::size_t iterations = 0;
  std::size_t free_count = 0;
  bool converged = true;
};

/// Kernel entry used by the drivers: writes the row optimum into `x`
/// (size b.size()) without allocating once `ws` has grown. Iterative
/// solvers write their final (clamped) iterate. `f_ref` is used only by
/// V-FISTA in reference mode.
RowStats solve_row(Method m, std::span<const double> b, std::span<double> x,
                   const SolverConfig& cfg, RowWorkspace& ws,
                   std::optional<double> f_ref = std::nullopt);

/// Primal-dual active set. Free set shrinks by the indices whose reduced
/// unconstrained optimum is positive; at most d shrinking passes.
/// `iterations` counts those passes. If `active_history` is given, the active
/// set after every pass is appended to it.
RowSolution solve_active_set(const RowSubproblem& p,
                             std::vector<std::vector<Index>>* active_history = nullptr);

/// Closed-form KKT point after a stable descending argsort of b.
RowSolution solve_sort_kkt(const RowSubproblem& p);

/// Index k₀ of the cut in the descending order (number of free variables).
std::size_t sort_kkt_cut(std::span<const double> b);

/// Interior point on the sign-flipped problem x̃ = −x ≥ 0. The returned x has
/// entries of x̃ below √ε snapped to zero; `raw_x` keeps the unclamped iterate
/// and `lambda` the final multipliers.
RowSolution solve_interior_point(const RowSubproblem& p, const SolverConfig& cfg = {});

/// V-FISTA with projection onto x ≤ 0, x⁰ = y⁰ = 0. With
/// cfg.vfista_stop == reference, `f_ref` must be provided.
RowSolution solve_vfista(const RowSubproblem& p, const SolverConfig& cfg = {},
                         std::optional<double> f_ref = std::nullopt);

/// Brute force over all 2^d active sets with a dense factorization of the
/// reduced Q; independent of the O(d) inverse used elsewhere. d ≤ 20.
RowSolution enumerate_active_sets(const RowSubproblem& p);
inline constexpr std::size_t kMaxEnumerationDimension = 20;

/// Dispatches to one of the four solvers.
RowSolution solve(Method m, const RowSubproblem& p, const SolverConfig& cfg = {});

// ---------------------------------------------------------------------------
// Full-matrix driver

enum class ExecutionPolicy {
  serial,
  /// Rows distributed over OpenMP threads; output is bitwise identical to serial.
  parallel,
};

struct DriverOptions {
  ExecutionPolicy execution = ExecutionPolicy::serial;
  /// Compute a per-row KKT residual (one extra O(d) pass per row).
  bool row_residuals = false;
  /// Processing order for the serial path; empty means 0..n−1.
  std::vector<std::size_t> row_order;
};

struct RowSummary {
  std::size_t degree = 0;
  std::size_t iterations = 0;
  std::size_t free_count = 0;
  bool converged = true;
  double kkt_residual = 0.0;
};

struct ProjectionResult {
  SparseRowMatrix laplacian;
  std::vector<RowSummary> rows;

  std::size_t max_iterations() const noexcept;
  double max_kkt_residual() const noexcept;
  bool all_converged() const noexcept;
};

/// Nearest loop-less Laplacian on the pattern of `g`. `g` must carry no
/// self-loop flags. Off-diagonals are the row optima x, the diagonal −Σx.
/// For the exact methods x is re-evaluated from A on the solver's free set,
/// which keeps feasible rows fixed to a few ulps.
ProjectionResult nearest_laplacian(const SparseRowMatrix& a, const GraphStructure& g,
                                   Method m, const SolverConfig& cfg = {},
                                   const DriverOptions& opts = {});

/// Solves one loop-less row of `a` into `out` (off-diagonals) and returns the
/// diagonal −Σx. Shared by the loop-less and loopy drivers.
double solve_loopless_row(const SparseRowMatrix& a, std::size_t i, Method m,
                          const SolverConfig& cfg, RowWorkspace& ws, std::span<double> out,
                          RowSummary& summary, bool with_residual);

/// KKT residual of the primal point stored in row i of `l`, with λ = −(Qx + b).
/// Solver independent; used to certify outputs after the fact.
double row_kkt_residual(const SparseRowMatrix& a, const SparseRowMatrix& l, std::size_t i);
double laplacian_kkt_residual(const SparseRowMatrix& a, const SparseRowMatrix& l);

}  // namespace nearlap
