#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "nearlap/instances.hpp"
#include "nearlap/solvers.hpp"

using namespace nearlap;

TEST_CASE("RNG streams are reproducible and distinct") {
  Rng a(42, 3), b(42, 3), c(42, 4);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  Rng u(1, 0);
  double mean = 0.0, var = 0.0;
  const int count = 20000;
  for (int k = 0; k < count; ++k) {
    const double v = u.normal();
    mean += v;
    var += v * v;
  }
  mean /= count;
  var = var / count - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("Watts-Strogatz lattice without rewiring") {
  const auto g = generate_ws_graph({4, 2, 0.0, 1});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g.degree(i) == 2);
    CHECK(g.find(i, (i + 1) % 4) >= 0);
    CHECK(g.find(i, (i + 3) % 4) >= 0);
  }
}

TEST_CASE("Watts-Strogatz with rewiring") {
  const WSParams p{100, 20, 0.2, 17};
  const auto g = generate_ws_graph(p);
  CHECK(g.edge_count() == 100 * 20);
  CHECK(!g.has_self_loops());
  std::size_t asymmetric = 0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const auto nb = g.neighbors(i);
    CHECK(std::set<Index>(nb.begin(), nb.end()).size() == nb.size());
    for (Index j : nb) {
      CHECK(j != i);
      if (g.find(j, i) < 0) ++asymmetric;
    }
  }
  CHECK(asymmetric == 0);
  CHECK(generate_ws_graph(p) == g);
  CHECK(!(generate_ws_graph({100, 20, 0.2, 18}) == g));
  CHECK(!(generate_ws_graph({100, 20, 0.0, 17}) == g));

  CHECK_THROWS_AS(generate_ws_graph({10, 3, 0.2, 1}), InputError);
  CHECK_THROWS_AS(generate_ws_graph({10, 10, 0.2, 1}), InputError);
  CHECK_THROWS_AS(generate_ws_graph({10, 4, 1.5, 1}), InputError);
}

TEST_CASE("noisy instances") {
  const auto g = generate_ws_graph({80, 10, 0.2, 2});
  const NoiseParams np{10.0, 5.0, 8};
  const auto inst = generate_noisy_instance(g, np);
  CHECK(validate_laplacian(inst.x_true, g, false).ok(1e-12));
  CHECK(inst.a.all_finite());
  CHECK(!(inst.a == inst.x_true));
  const auto again = generate_noisy_instance(g, np);
  CHECK(again.a == inst.a);
  CHECK(again.x_true == inst.x_true);
  for (double v : inst.x_true.values()) {
    CHECK(v < 0.0);
    CHECK(v > -10.0);
  }

  const auto clean = generate_noisy_instance(g, {10.0, 0.0, 8});
  CHECK(clean.a == clean.x_true);
  CHECK(max_abs_difference(nearest_laplacian(clean.a, g, Method::sort_kkt).laplacian,
                           clean.x_true) <= 1e-12);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = generate_noisy_instance(g, {10.0, 5.0, seed});
    const auto l = nearest_laplacian(s.a, g, Method::sort_kkt).laplacian;
    CHECK(squared_distance(s.a, l) <= squared_distance(s.a, s.x_true));
  }
  CHECK_THROWS_AS(generate_noisy_instance(testing::star(2, true), np), InputError);
  CHECK_THROWS_AS(generate_noisy_instance(g, {0.0, 1.0, 1}), InputError);
}

TEST_CASE("worst-case sequence") {
  WorstCaseOptions exact;
  exact.relative_slack = 0.0;
  const auto s = worst_case_sequence(4, exact);
  CHECK(s.b == std::vector<double>{-0.5, -1.0, -2.5, -8.5});
  CHECK(s.s == std::vector<double>{-0.5, -1.5, -4.0, -12.5});
  CHECK(worst_case_sequence(1).b == std::vector<double>{-0.5});

  for (std::size_t d : {2u, 30u, 100u, 170u}) {
    const auto w = worst_case_sequence(d);
    for (std::size_t k = 1; k < d; ++k) CHECK(w.b[k] < w.b[k - 1]);
    for (std::size_t k = 0; k < d; ++k) CHECK(w.b[k] <= std::ldexp(w.b[0], static_cast<int>(k)));
  }
  CHECK_THROWS_AS(worst_case_sequence(901), DimensionTooLarge);
  CHECK_THROWS_AS(worst_case_sequence(200), DimensionTooLarge);
  CHECK_THROWS_AS(worst_case_sequence(0), InputError);
  const auto scaled = worst_case_sequence(200, WorstCaseOptions::for_degree(200));
  CHECK(scaled.d() == 200);
  CHECK(WorstCaseOptions::for_degree(100).first_term == -0.5);
}

TEST_CASE("worst-case matrix drives the active set through every index") {
  const auto g = testing::star(4);
  const auto a = worst_case_matrix(g, {-0.5, 0.0});
  CHECK(a.diag(0) == 0.0);
  CHECK(std::vector<double>(a.row(0).begin(), a.row(0).end()) ==
        std::vector<double>{0.25, 0.5, 1.25, 4.25});
  const auto p = build_row_subproblem(a, g, 0);
  CHECK(p.b == std::vector<double>{-0.5, -1.0, -2.5, -8.5});
  std::vector<std::vector<Index>> hist;
  const auto s = solve_active_set(p, &hist);
  CHECK(s.iterations == 4);
  REQUIRE(hist.size() == 4);
  CHECK(hist[0] == std::vector<Index>{3});
  CHECK(hist[1] == std::vector<Index>{2, 3});
  CHECK(hist[2] == std::vector<Index>{1, 2, 3});
  CHECK(hist[3] == std::vector<Index>{0, 1, 2, 3});

  for (std::size_t d = 1; d <= 60; ++d) {
    const auto w = worst_case_sequence(d);
    std::vector<std::vector<Index>> h;
    const auto r = solve_active_set({w.b}, &h);
    CHECK(r.iterations == d);
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(h[k].size() == k + 1);
    CHECK(r.x == std::vector<double>(d, 0.0));
    std::vector<double> lam(d);
    for (std::size_t k = 0; k < d; ++k) lam[k] = -w.b[k];
    CHECK(kkt_residual(r.x, lam, RowSubproblem{w.b}) == 0.0);
    CHECK(sort_kkt_cut(w.b) == 0);
  }
}

TEST_CASE("worst case on a lattice") {
  const auto g = generate_ws_graph({400, 200, 0.0, 1});
  const auto a = worst_case_matrix(g);
  const auto r = nearest_laplacian(a, g, Method::active_set);
  for (const auto& row : r.rows) CHECK(row.iterations == 200);
  CHECK(nearest_laplacian(a, g, Method::sort_kkt).laplacian == SparseRowMatrix(g));
}
