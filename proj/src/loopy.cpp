#include "nearlap/loopy.hpp"

#include <algorithm>
#include <exception>

namespace nearlap {

namespace {

// Writes row i of the loopy optimum into (diag, out); returns the branch taken.
LoopyBranch loopy_row_into(const SparseRowMatrix& a, const GraphStructure& g, std::size_t i,
                           Method m, const SolverConfig& cfg, RowWorkspace& ws, double& diag,
                           std::span<double> out, RowSummary& summary, bool with_residual) {
  if (!g.has_self_loop(i)) {
    diag = solve_loopless_row(a, i, m, cfg, ws, out, summary, with_residual);
    return LoopyBranch::loopless;
  }
  auto r = a.row(i);
  double sum = std::max(0.0, a.diag(i));
  for (std::size_t k = 0; k < r.size(); ++k) {
    out[k] = std::min(0.0, r[k]);
    sum += out[k];
  }
  if (sum >= 0.0) {
    diag = std::max(0.0, a.diag(i));
    summary = RowSummary{r.size(), 0, static_cast<std::size_t>(std::count_if(
                                          out.begin(), out.end(), [](double v) { return v < 0; })),
                         true, 0.0};
    return LoopyBranch::clipped;
  }
  diag = solve_loopless_row(a, i, m, cfg, ws, out, summary, with_residual);
  return LoopyBranch::reduced;
}

}  // namespace

ClippedRow clip_row(const SparseRowMatrix& a, const GraphStructure& g, std::size_t i) {
  if (i >= g.n()) throw InputError("row index out of range");
  if (!g.has_self_loop(i))
    throw InputError("clip_row: node " + std::to_string(i + 1) + " has no self-loop");
  ClippedRow c;
  c.diag = std::max(0.0, a.diag(i));
  c.row_sum = c.diag;
  for (double v : a.row(i)) {
    c.neighbors.push_back(std::min(0.0, v));
    c.row_sum += c.neighbors.back();
  }
  return c;
}

LoopyRow solve_loopy_row(const SparseRowMatrix& a, const GraphStructure& g, std::size_t i,
                         Method m, const SolverConfig& cfg) {
  a.require_pattern(g);
  if (i >= g.n()) throw InputError("row index out of range");
  cfg.validate();
  RowWorkspace ws;
  LoopyRow row;
  row.neighbors.resize(g.degree(i));
  row.branch =
      loopy_row_into(a, g, i, m, cfg, ws, row.diag, row.neighbors, row.summary, true);
  return row;
}

LoopyProjectionResult nearest_loopy_laplacian(const SparseRowMatrix& a, const GraphStructure& g,
                                              Method m, const SolverConfig& cfg,
                                              const DriverOptions& opts) {
  a.require_pattern(g);
  cfg.validate();
  const std::size_t n = g.n();
  LoopyProjectionResult res{SparseRowMatrix(g), std::vector<RowSummary>(n),
                            std::vector<LoopyBranch>(n)};
  auto solve_one = [&](std::size_t i, RowWorkspace& ws) {
    try {
      res.branches[i] = loopy_row_into(a, g, i, m, cfg, ws, res.laplacian.diag(i),
                                       res.laplacian.row(i), res.rows[i], opts.row_residuals);
    } catch (const SolverError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(i, e.what());
    }
  };

  if (opts.execution == ExecutionPolicy::serial) {
    RowWorkspace ws;
    if (opts.row_order.empty()) {
      for (std::size_t i = 0; i < n; ++i) solve_one(i, ws);
    } else {
      if (opts.row_order.size() != n) throw InputError("row_order must list every row once");
      for (std::size_t i : opts.row_order) solve_one(i, ws);
    }
    return res;
  }

  std::exception_ptr failure;
#pragma omp parallel
  {
    RowWorkspace ws;
#pragma omp for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        solve_one(static_cast<std::size_t>(i), ws);
      } catch (...) {
#pragma omp critical(nearlap_loopy_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return res;
}

}  // namespace nearlap
