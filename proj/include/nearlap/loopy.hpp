#pragma once

// Nearest loopy Laplacian. Rows without a self-loop are loop-less rows. For
// a self-loop row, clipping A to the sign constraints is optimal whenever
// the clipped row sum is nonnegative; otherwise the optimal self-loop weight
// is zero and the row is solved as if it had no self-loop.

#include "nearlap/solvers.hpp"

namespace nearlap {

struct ClippedRow {
  double diag = 0.0;
  /// Entries on neighbors(i), in the same order.
  std::vector<double> neighbors;
  double row_sum = 0.0;
};

/// A′: diagonal max(0, A_ii), neighbors min(0, A_ij). Row i must carry a
/// self-loop flag.
ClippedRow clip_row(const SparseRowMatrix& a, const GraphStructure& g, std::size_t i);

enum class LoopyBranch {
  /// No self-loop: plain loop-less row.
  loopless,
  /// Self-loop and Σ A′ ≥ 0: the clipped row is optimal.
  clipped,
  /// Self-loop and Σ A′ < 0: self-loop weight zero, solved loop-less.
  reduced,
};

struct LoopyRow {
  double diag = 0.0;
  std::vector<double> neighbors;
  LoopyBranch branch = LoopyBranch::loopless;
  RowSummary summary;
};

LoopyRow solve_loopy_row(const SparseRowMatrix& a, const GraphStructure& g, std::size_t i,
                         Method m, const SolverConfig& cfg = {});

struct LoopyProjectionResult {
  SparseRowMatrix laplacian;
  std::vector<RowSummary> rows;
  std::vector<LoopyBranch> branches;
};

LoopyProjectionResult nearest_loopy_laplacian(const SparseRowMatrix& a, const GraphStructure& g,
                                              Method m, const SolverConfig& cfg = {},
                                              const DriverOptions& opts = {});

}  // namespace nearlap
