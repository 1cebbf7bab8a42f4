#include "nearlap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "row_kernels.hpp"

namespace nearlap {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::active_set: return "active_set";
    case Method::sort_kkt: return "sort_kkt";
    case Method::interior_point: return "interior_point";
    case Method::vfista: return "vfista";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "active_set") return Method::active_set;
  if (name == "sort_kkt" || name == "sort") return Method::sort_kkt;
  if (name == "interior_point" || name == "ip") return Method::interior_point;
  if (name == "vfista") return Method::vfista;
  throw InputError("unknown method '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  auto bad = [](const char* what) { throw InputError(std::string("solver config: ") + what); };
  if (!(ip_epsilon > 0.0)) bad("ip_epsilon must be > 0");
  if (!(ip_alpha > 0.0)) bad("ip_alpha must be > 0");
  if (!(ip_rho > 0.0 && ip_rho < 1.0)) bad("ip_rho must lie in (0, 1)");
  if (!(ip_sigma > 0.0 && ip_sigma < 1.0)) bad("ip_sigma must lie in (0, 1)");
  if (!(vfista_epsilon > 0.0)) bad("vfista_epsilon must be > 0");
  if (!(vfista_sigma > 0.0)) bad("vfista_sigma must be > 0");
  if (vfista_beta != 0.0 && !(vfista_beta >= vfista_sigma)) bad("vfista_beta must be >= sigma");
}

std::size_t SolverConfig::ip_iteration_cap(std::size_t d) const {
  return ip_max_iter != 0 ? ip_max_iter : 10 * d + 200;
}

std::size_t SolverConfig::vfista_iteration_cap(std::size_t d) const {
  if (vfista_max_iter != 0) return vfista_max_iter;
  // 20× the iteration estimate log(1/ε) / log(√(1+d) / (√(1+d) − 1)), plus slack.
  const double r = std::sqrt(1.0 + static_cast<double>(d));
  const double per_decade = std::log(r / (r - 1.0));
  const double est = std::log(1.0 / vfista_epsilon) / per_decade;
  return 100 + static_cast<std::size_t>(std::ceil(20.0 * std::max(est, 1.0)));
}

RowStats solve_row(Method m, std::span<const double> b, std::span<double> x,
                   const SolverConfig& cfg, RowWorkspace& ws, std::optional<double> f_ref) {
  switch (m) {
    case Method::active_set: return detail::active_set_kernel(b, x, ws, nullptr);
    case Method::sort_kkt: return detail::sort_kkt_kernel(b, x, ws);
    case Method::interior_point: return detail::interior_point_kernel(b, x, cfg, ws, nullptr);
    case Method::vfista:
      if (cfg.vfista_stop == VfistaStop::reference && !f_ref) {
        ws.xref.resize(b.size());
        detail::sort_kkt_kernel(b, ws.xref, ws);
        f_ref = objective(ws.xref, b);
      }
      return detail::vfista_kernel(b, x, cfg, ws, f_ref, nullptr);
  }
  throw Error("solve_row: unknown method");
}

RowSolution solve(Method m, const RowSubproblem& p, const SolverConfig& cfg) {
  switch (m) {
    case Method::active_set: return solve_active_set(p);
    case Method::sort_kkt: return solve_sort_kkt(p);
    case Method::interior_point: return solve_interior_point(p, cfg);
    case Method::vfista: {
      std::optional<double> f_ref;
      if (cfg.vfista_stop == VfistaStop::reference) f_ref = solve_sort_kkt(p).objective;
      return solve_vfista(p, cfg, f_ref);
    }
  }
  throw Error("solve: unknown method");
}

// ---------------------------------------------------------------------------

std::size_t ProjectionResult::max_iterations() const noexcept {
  std::size_t m = 0;
  for (const auto& r : rows) m = std::max(m, r.iterations);
  return m;
}

double ProjectionResult::max_kkt_residual() const noexcept {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.kkt_residual);
  return m;
}

bool ProjectionResult::all_converged() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const RowSummary& r) { return r.converged; });
}

double row_kkt_residual(const SparseRowMatrix& a, const SparseRowMatrix& l, std::size_t i) {
  const std::size_t d = a.row(i).size();
  std::vector<double> b(d), lambda(d);
  fill_row_subproblem(a, i, b);
  auto x = l.row(i);
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (std::size_t k = 0; k < d; ++k) lambda[k] = -(2.0 * x[k] + 2.0 * s + b[k]);
  return kkt_residual(x, lambda, b);
}

double laplacian_kkt_residual(const SparseRowMatrix& a, const SparseRowMatrix& l) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) m = std::max(m, row_kkt_residual(a, l, i));
  return m;
}

double solve_loopless_row(const SparseRowMatrix& a, std::size_t i, Method m,
                          const SolverConfig& cfg, RowWorkspace& ws, std::span<double> out,
                          RowSummary& summary, bool with_residual) {
  const std::size_t d = out.size();
  ws.b.resize(d);
  fill_row_subproblem(a, i, ws.b);
  for (double v : ws.b)
    if (!std::isfinite(v)) throw Error("non-finite entry in row subproblem");
  const RowStats st = solve_row(m, ws.b, out, cfg, ws);
  if (m == Method::active_set || m == Method::sort_kkt) {
    // Re-evaluate the closed form on the free set F from A directly:
    // x_F = A_F − (A_ii + Σ_F A_ij)/(1+|F|). Same value as ½(c − b_F), without
    // the cancellation between b entries of size ~2·A_ii.
    auto& in_free = ws.v4;
    in_free.assign(d, 0.0);
    for (Index j : ws.idx0) in_free[j] = 1.0;
    auto r = a.row(i);
    double t = a.diag(i);
    for (std::size_t k = 0; k < d; ++k)
      if (in_free[k] != 0.0) t += r[k];
    const double shift = t / (1.0 + static_cast<double>(ws.idx0.size()));
    for (std::size_t k = 0; k < d; ++k) out[k] = in_free[k] != 0.0 ? std::min(0.0, r[k] - shift) : 0.0;
  }
  summary.degree = d;
  summary.iterations = st.iterations;
  summary.free_count = st.free_count;
  summary.converged = st.converged;
  double s = 0.0;
  for (double v : out) s += v;
  if (with_residual) {
    auto& lambda = ws.v5;
    lambda.resize(d);
    if (m == Method::interior_point) {
      // Certify the solver's own primal-dual pair (raw iterate, multipliers).
      auto& raw = ws.v4;
      raw.resize(d);
      for (std::size_t k = 0; k < d; ++k) raw[k] = -ws.v0[k];
      std::copy_n(ws.v1.begin(), d, lambda.begin());
      summary.kkt_residual = kkt_residual(raw, lambda, ws.b);
    } else {
      for (std::size_t k = 0; k < d; ++k) lambda[k] = -(2.0 * out[k] + 2.0 * s + ws.b[k]);
      summary.kkt_residual = kkt_residual(out, lambda, ws.b);
    }
  }
  return -s;
}

ProjectionResult nearest_laplacian(const SparseRowMatrix& a, const GraphStructure& g, Method m,
                                   const SolverConfig& cfg, const DriverOptions& opts) {
  a.require_pattern(g);
  if (g.has_self_loops())
    throw InputError("nearest_laplacian: graph has self-loops; use nearest_loopy_laplacian");
  cfg.validate();

  const std::size_t n = g.n();
  ProjectionResult res{SparseRowMatrix(g), std::vector<RowSummary>(n)};
  auto solve_one = [&](std::size_t i, RowWorkspace& ws) {
    try {
      res.laplacian.diag(i) = solve_loopless_row(a, i, m, cfg, ws, res.laplacian.row(i),
                                                 res.rows[i], opts.row_residuals);
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
#pragma omp critical(nearlap_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return res;
}

}  // namespace nearlap
