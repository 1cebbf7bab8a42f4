#pragma once

// Identification of Laplacian dynamics x_{k+1} = (I − hL)x_k from sampled
// states by projected gradient: each step moves along the negative gradient
// of (1/N)‖X′ − (I − hL)X‖²_F and projects back onto the Laplacians of the
// known structure.

#include <optional>
#include <span>
#include <vector>

#include "nearlap/io.hpp"
#include "nearlap/solvers.hpp"

namespace nearlap {

/// Row-major dense matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct TrajectoryData {
  /// n×N: columns x_0 … x_{N−1}.
  DenseMatrix x;
  /// n×N: columns x_1 … x_N.
  DenseMatrix x_next;
  double h = 0.0;

  std::size_t n() const noexcept { return x.rows; }
  std::size_t samples() const noexcept { return x.cols; }
  void validate() const;

  /// Pairs consecutive states of every trajectory; all must share h and n.
  static TrajectoryData from_trajectories(std::span<const Trajectory> runs);
};

struct SysidConfig {
  /// Empty selects 1/(2h²λ_max(XXᵀ)/N), the Lipschitz constant of the gradient.
  std::optional<double> step_size;
  std::size_t max_iter = 20000;
  /// Stop when ‖L − Π(L − η∇)‖_F ≤ grad_tol.
  double grad_tol = 1e-10;
  bool loopy = false;
  Method method = Method::sort_kkt;
  ExecutionPolicy execution = ExecutionPolicy::serial;

  void validate() const;
};

double sysid_objective(const SparseRowMatrix& l, const TrajectoryData& data);

/// (2h/N)·R·Xᵀ with R = X′ − (I − hL)X, restricted to the pattern of `l`
/// and the diagonal.
SparseRowMatrix sysid_gradient(const SparseRowMatrix& l, const TrajectoryData& data);

/// 2h²λ_max(XXᵀ)/N by power iteration.
double sysid_lipschitz(const TrajectoryData& data);

struct IdentifyResult {
  SparseRowMatrix laplacian;
  std::size_t iterations = 0;
  bool converged = false;
  double step_size = 0.0;
  double stationarity = 0.0;
  /// Objective at every iterate, starting with the projected initial point.
  std::vector<double> objective_history;
};

/// Projected gradient from L⁰ = Π(0) (or Π(initial) when given).
IdentifyResult identify_laplacian(const TrajectoryData& data, const GraphStructure& g,
                                  const SysidConfig& cfg,
                                  const SparseRowMatrix* initial = nullptr);

/// Exact Euler steps x_{k+1} = (I − hL)x_k starting from x0.
Trajectory simulate_trajectory(const SparseRowMatrix& l, std::span<const double> x0, double h,
                               std::size_t steps);

}  // namespace nearlap
