#pragma once

// Reproducible instances: Watts–Strogatz structures, noisy Laplacians on them,
// and the worst-case inputs for the active-set solver.
//
// Randomness is portable across platforms: every stream is a std::mt19937_64
// (fully specified by the standard) seeded by SplitMix64(seed, stream id);
// uniform variates are (u >> 11)·2⁻⁵³ and normals come from Box–Muller.

#include <cstdint>
#include <random>

#include "nearlap/core.hpp"

namespace nearlap {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double normal();
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct WSParams {
  std::size_t n = 100;
  /// Average out-degree after replacing each undirected edge by two arcs.
  std::size_t mean_degree = 20;
  double rewire_p = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct NoiseParams {
  double weight_scale = 10.0;
  double noise_scale = 5.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Ring lattice with mean_degree/2 neighbors per side, each lattice edge
/// rewired with probability rewire_p (no self-loops, no duplicates), then
/// every undirected edge emitted in both directions. Neighbor lists sorted.
GraphStructure generate_ws_graph(const WSParams& p);

/// Flags each node as having a self-loop with the given probability.
GraphStructure add_random_self_loops(const GraphStructure& g, double probability,
                                     std::uint64_t seed);

struct NoisyInstance {
  SparseRowMatrix a;
  SparseRowMatrix x_true;
};

/// X: Laplacian with w_ij = weight_scale·U(0,1) on every arc; A = X plus
/// noise_scale·N(0,1) on pattern ∪ diagonal. Row i uses its own stream.
NoisyInstance generate_noisy_instance(const GraphStructure& g, const NoiseParams& p);

// ---------------------------------------------------------------------------
// Worst case for the active-set solver

struct WorstCaseOptions {
  double first_term = -0.5;
  /// b_k = (1 + slack)·((k+1)b_{k−1} − S_{k−1}). Zero gives the equality
  /// sequence, which sits exactly on the free/active tie at every pass and
  /// loses the worst-case behavior to rounding for d ≳ 20.
  double relative_slack = 1e-9;

  /// −1/2 when the sequence stays finite for length d, else −2⁻¹⁰⁰⁰ (the
  /// active-set iteration is scale invariant).
  static WorstCaseOptions for_degree(std::size_t d);
};

struct WorstCaseSequence {
  std::vector<double> b;
  /// S_k = b_1 + … + b_k.
  std::vector<double> s;

  std::size_t d() const noexcept { return b.size(); }
};

inline constexpr std::size_t kMaxWorstCaseDimension = 900;

/// Throws DimensionTooLarge for d > 900 or when an entry overflows.
WorstCaseSequence worst_case_sequence(std::size_t d, const WorstCaseOptions& opt = {});

/// A_ii = 0, A_{i,N(i)_k} = −b_k/2 with the sequence for d_i, so each row's
/// subproblem vector is exactly the worst-case sequence. Options default to
/// for_degree(max degree).
SparseRowMatrix worst_case_matrix(const GraphStructure& g);
SparseRowMatrix worst_case_matrix(const GraphStructure& g, const WorstCaseOptions& opt);

}  // namespace nearlap
