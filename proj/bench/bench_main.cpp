// Serial versus row-parallel projection for every method, on a noisy
// Watts-Strogatz instance and on the active-set worst case.

#include <benchmark/benchmark.h>

#include "nearlap/instances.hpp"
#include "nearlap/solvers.hpp"

using namespace nearlap;

namespace {

struct Instance {
  GraphStructure g;
  SparseRowMatrix a;
};

const Instance& noisy() {
  static const Instance inst = [] {
    auto g = generate_ws_graph({10000, 20, 0.2, 1});
    auto a = generate_noisy_instance(g, {10.0, 5.0, 1}).a;
    return Instance{std::move(g), std::move(a)};
  }();
  return inst;
}

const Instance& worst() {
  static const Instance inst = [] {
    auto g = generate_ws_graph({2000, 100, 0.0, 1});
    auto a = worst_case_matrix(g);
    return Instance{std::move(g), std::move(a)};
  }();
  return inst;
}

void project(benchmark::State& state, const Instance& inst) {
  const auto m = static_cast<Method>(state.range(0));
  DriverOptions opts;
  opts.execution = state.range(1) ? ExecutionPolicy::parallel : ExecutionPolicy::serial;
  for (auto _ : state) {
    auto r = nearest_laplacian(inst.a, inst.g, m, {}, opts);
    benchmark::DoNotOptimize(r.laplacian.diagonal().data());
  }
  state.SetLabel(std::string(method_name(m)) + (state.range(1) ? "/parallel" : "/serial"));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(inst.g.n()));
}

void BM_noisy(benchmark::State& state) { project(state, noisy()); }
void BM_worst(benchmark::State& state) { project(state, worst()); }

void all_methods(benchmark::internal::Benchmark* b) {
  for (Method m : kAllMethods)
    for (int par : {0, 1}) b->Args({static_cast<std::int64_t>(m), par});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_noisy)->Apply(all_methods);
BENCHMARK(BM_worst)->Apply(all_methods);

BENCHMARK_MAIN();
