#pragma once

// Allocation-free row kernels behind solve_row(). Each writes the primal
// result into `x` and leaves solver-specific state in the workspace:
//   active set / sort-KKT: ws.idx0 holds the final free set,
//   interior point:        ws.v0 = x̃ (raw), ws.v1 = λ,
//   V-FISTA:               nothing beyond x.

#include <optional>
#include <vector>

#include "nearlap/solvers.hpp"

namespace nearlap::detail {

RowStats active_set_kernel(std::span<const double> b, std::span<double> x, RowWorkspace& ws,
                           std::vector<std::vector<Index>>* active_history);

RowStats sort_kkt_kernel(std::span<const double> b, std::span<double> x, RowWorkspace& ws);

RowStats interior_point_kernel(std::span<const double> b, std::span<double> x,
                               const SolverConfig& cfg, RowWorkspace& ws,
                               std::vector<TraceEntry>* trace);

RowStats vfista_kernel(std::span<const double> b, std::span<double> x, const SolverConfig& cfg,
                       RowWorkspace& ws, std::optional<double> f_ref,
                       std::vector<TraceEntry>* trace);

/// Fills lambda = −(Qx + b) on the active set (zero on the free set), the
/// index sets and the objective.
void complete_solution(std::span<const double> b, RowSolution& sol,
                       std::span<const Index> free_set);

}  // namespace nearlap::detail
