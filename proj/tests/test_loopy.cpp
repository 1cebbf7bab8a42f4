#include <doctest.h>

#include "helpers.hpp"
#include "nearlap/instances.hpp"
#include "nearlap/loopy.hpp"
#include "oracles.hpp"

using namespace nearlap;
using testing::max_abs_diff;

namespace {

SparseRowMatrix row_matrix(const GraphStructure& g, double diag, std::vector<double> nb) {
  SparseRowMatrix a(g);
  a.diag(0) = diag;
  std::copy(nb.begin(), nb.end(), a.row(0).begin());
  return a;
}

double row_distance(const SparseRowMatrix& a, std::size_t i, double diag,
                    std::span<const double> nb) {
  double s = (diag - a.diag(i)) * (diag - a.diag(i));
  for (std::size_t k = 0; k < nb.size(); ++k) s += (nb[k] - a.row(i)[k]) * (nb[k] - a.row(i)[k]);
  return s;
}

}  // namespace

TEST_CASE("clip_row") {
  const auto g = testing::star(2, true);
  auto c = clip_row(row_matrix(g, 3.0, {-1.0, 2.0}), g, 0);
  CHECK(c.diag == 3.0);
  CHECK(c.neighbors == std::vector<double>{-1.0, 0.0});
  CHECK(c.row_sum == 2.0);

  c = clip_row(row_matrix(g, -1.0, {-2.0, 1.0}), g, 0);
  CHECK(c.diag == 0.0);
  CHECK(c.neighbors == std::vector<double>{-2.0, 0.0});
  CHECK(c.row_sum == -2.0);

  const auto g0 = testing::star(0, true);
  c = clip_row(row_matrix(g0, -5.0, {}), g0, 0);
  CHECK(c.diag == 0.0);
  CHECK(c.row_sum == 0.0);

  CHECK_THROWS_AS(clip_row(row_matrix(g, 1.0, {0.0, 0.0}), g, 1), InputError);
}

TEST_CASE("solve_loopy_row branches") {
  const auto g = testing::star(2, true);
  auto r = solve_loopy_row(row_matrix(g, 3.0, {-1.0, 2.0}), g, 0, Method::sort_kkt);
  CHECK(r.branch == LoopyBranch::clipped);
  CHECK(r.diag == 3.0);
  CHECK(r.neighbors == std::vector<double>{-1.0, 0.0});
  const auto ref = oracle::nearest_row(3.0, {-1.0, 2.0}, true);
  CHECK(max_abs_diff(ref, std::vector<double>{3.0, -1.0, 0.0}) < 1e-12);

  r = solve_loopy_row(row_matrix(g, -1.0, {-2.0, 1.0}), g, 0, Method::sort_kkt);
  CHECK(r.branch == LoopyBranch::reduced);
  CHECK(r.diag == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(max_abs_diff(r.neighbors, std::vector<double>{-0.5, 0.0}) < 1e-15);
  const auto reduced = enumerate_active_sets({{2.0, -4.0}});
  CHECK(max_abs_diff(r.neighbors, reduced.x) < 1e-15);

  const auto g0 = testing::star(0, true);
  r = solve_loopy_row(row_matrix(g0, -5.0, {}), g0, 0, Method::active_set);
  CHECK(r.diag == 0.0);

  const auto gl = testing::star(2, false);
  r = solve_loopy_row(row_matrix(gl, 3.0, {-1.0, 2.0}), gl, 0, Method::sort_kkt);
  CHECK(r.branch == LoopyBranch::loopless);
  CHECK(r.diag + r.neighbors[0] + r.neighbors[1] == doctest::Approx(0.0));
}

TEST_CASE("both branches agree at a zero clipped row sum") {
  const auto g = testing::star(3, true);
  // A′ = (2, −1.5, −0.5, 0): Σ = 0 exactly.
  const auto a = row_matrix(g, 2.0, {-1.5, -0.5, 4.0});
  const auto r = solve_loopy_row(a, g, 0, Method::sort_kkt);
  CHECK(r.branch == LoopyBranch::clipped);
  const auto as_loopless =
      solve_loopy_row(a, g.without_self_loops(), 0, Method::sort_kkt);
  CHECK(std::abs(r.diag - as_loopless.diag) < 1e-14);
  CHECK(max_abs_diff(r.neighbors, as_loopless.neighbors) < 1e-14);
}

TEST_CASE("loopy rows against the brute-force projection") {
  Rng rng(77, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t d = rng.below(7);
    const bool loop = rng.uniform() < 0.7;
    const auto g = testing::star(d, loop);
    const auto a = testing::random_matrix(g, rng, 3.0);
    std::vector<double> nb(a.row(0).begin(), a.row(0).end());
    const auto ref = oracle::nearest_row(a.diag(0), nb, loop);
    for (Method m : {Method::active_set, Method::sort_kkt}) {
      const auto r = solve_loopy_row(a, g, 0, m);
      CHECK(std::abs(r.diag - ref[0]) <= 1e-8);
      CHECK(max_abs_diff(r.neighbors, std::span<const double>(ref).subspan(1)) <= 1e-8);

      CHECK(r.diag >= -1e-12);
      double sum = r.diag;
      for (double v : r.neighbors) {
        CHECK(v <= 1e-12);
        sum += v;
      }
      if (loop) {
        CHECK(sum >= -1e-12);
        const auto c = clip_row(a, g, 0);
        CHECK((sum > 1e-12) == (c.row_sum > 1e-12));
        if (c.row_sum < 0.0) CHECK(r.diag >= std::max(0.0, a.diag(0)) - 1e-12);
      } else {
        CHECK(std::abs(sum) <= 1e-12);
      }

      // Random feasible rows are never closer to A.
      const double best = row_distance(a, 0, r.diag, r.neighbors);
      for (int k = 0; k < 200; ++k) {
        std::vector<double> z(d);
        double s = 0.0;
        for (double& v : z) {
          v = -4.0 * rng.uniform();
          s += v;
        }
        const double diag = loop ? -s + 3.0 * rng.uniform() : -s;
        CHECK(best <= row_distance(a, 0, diag, z) + 1e-12);
      }
    }
  }
}

TEST_CASE("nearest_loopy_laplacian") {
  const auto base = generate_ws_graph({60, 6, 0.2, 9});
  const auto g = add_random_self_loops(base, 0.5, 9);
  REQUIRE(g.has_self_loops());

  Rng rng(1, 0);
  const auto a = testing::random_matrix(g, rng);
  for (Method m : kAllMethods) {
    const auto r = nearest_loopy_laplacian(a, g, m);
    CHECK(validate_laplacian(r.laplacian, g, true).ok(1e-12));
    DriverOptions par;
    par.execution = ExecutionPolicy::parallel;
    CHECK(nearest_loopy_laplacian(a, g, m, {}, par).laplacian == r.laplacian);
  }
  const auto exact = nearest_loopy_laplacian(a, g, Method::sort_kkt).laplacian;
  CHECK(max_abs_difference(nearest_loopy_laplacian(exact, g, Method::sort_kkt).laplacian, exact) <=
        1e-12);

  // Feasible input is a fixed point; on clipped rows it is returned bit for bit.
  SparseRowMatrix pos(g);
  for (std::size_t i = 0; i < g.n(); ++i) {
    double s = 0.0;
    for (double& v : pos.row(i)) {
      v = -1.0 - rng.uniform();
      s += v;
    }
    pos.diag(i) = g.has_self_loop(i) ? -s + 1.0 + rng.uniform() : -s;
  }
  const auto fixed = nearest_loopy_laplacian(pos, g, Method::active_set);
  CHECK(max_abs_difference(fixed.laplacian, pos) <= 1e-12);
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (fixed.branches[i] != LoopyBranch::clipped) continue;
    CHECK(fixed.laplacian.diag(i) == pos.diag(i));
    CHECK(max_abs_diff(fixed.laplacian.row(i), pos.row(i)) == 0.0);
  }
}

TEST_CASE("small mixed graphs against the row-wise oracle") {
  Rng rng(31, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 6;
    std::vector<std::vector<Index>> nb(n);
    std::vector<bool> loops(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && nb[i].size() < 4 && rng.uniform() < 0.5) nb[i].push_back(static_cast<Index>(j));
      loops[i] = rng.uniform() < 0.5;
    }
    const GraphStructure g(n, nb, loops);
    const auto a = testing::random_matrix(g, rng);
    const auto l = nearest_loopy_laplacian(a, g, Method::sort_kkt).laplacian;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(a.row(i).begin(), a.row(i).end());
      const auto ref = oracle::nearest_row(a.diag(i), row, loops[i]);
      CHECK(std::abs(l.diag(i) - ref[0]) <= 1e-8);
      CHECK(max_abs_diff(l.row(i), std::span<const double>(ref).subspan(1)) <= 1e-8);
    }
  }
}
