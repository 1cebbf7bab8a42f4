#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nearlap/core.hpp"
#include "nearlap/instances.hpp"

namespace testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline nearlap::RowSubproblem random_row(nearlap::Rng& rng, std::size_t d, double lo = -10.0,
                                         double hi = 10.0) {
  nearlap::RowSubproblem p;
  p.b.resize(d);
  for (double& v : p.b) v = lo + (hi - lo) * rng.uniform();
  return p;
}

/// One-row-of-interest graph: node 0 points to nodes 1..d.
inline nearlap::GraphStructure star(std::size_t d, bool self_loop = false) {
  std::vector<std::vector<nearlap::Index>> nb(d + 1);
  for (std::size_t k = 1; k <= d; ++k) nb[0].push_back(static_cast<nearlap::Index>(k));
  std::vector<bool> loops(d + 1, false);
  loops[0] = self_loop;
  return nearlap::GraphStructure(d + 1, nb, loops);
}

inline nearlap::SparseRowMatrix random_matrix(const nearlap::GraphStructure& g, nearlap::Rng& rng,
                                              double scale = 5.0) {
  nearlap::SparseRowMatrix a(g);
  for (std::size_t i = 0; i < g.n(); ++i) {
    a.diag(i) = scale * rng.normal();
    for (double& v : a.row(i)) v = scale * rng.normal();
  }
  return a;
}

}  // namespace testing
