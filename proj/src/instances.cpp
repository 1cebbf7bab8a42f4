#include "nearlap/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace nearlap {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  for (;;) {
    const double u = uniform();
    if (u > 0.0) return u;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t v = engine_();
    if (v < limit) return v % bound;
  }
}

// ---------------------------------------------------------------------------

void WSParams::validate() const {
  if (n == 0) throw InputError("WS: n must be positive");
  if (mean_degree == 0 || mean_degree % 2 != 0)
    throw InputError("WS: mean_degree must be a positive even integer");
  if (mean_degree >= n) throw InputError("WS: mean_degree must be < n");
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0)) throw InputError("WS: rewire_p must lie in [0, 1]");
}

void NoiseParams::validate() const {
  if (!(weight_scale > 0.0)) throw InputError("noise: weight_scale must be > 0");
  if (!(noise_scale >= 0.0)) throw InputError("noise: noise_scale must be >= 0");
}

namespace {
// Stream ids; distinct generators never share a stream for the same seed.
constexpr std::uint64_t kStreamGraph = 1ULL << 62;
constexpr std::uint64_t kStreamSelfLoops = (1ULL << 62) + 1;
constexpr std::uint64_t kStreamRowBase = 0;
}  // namespace

GraphStructure generate_ws_graph(const WSParams& p) {
  p.validate();
  const std::size_t n = p.n;
  const std::size_t half = p.mean_degree / 2;
  std::vector<std::set<Index>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= half; ++j) {
      const auto v = static_cast<Index>((u + j) % n);
      adj[u].insert(v);
      adj[v].insert(static_cast<Index>(u));
    }
  }
  Rng rng(p.seed, kStreamGraph);
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      const auto v = static_cast<Index>((u + j) % n);
      if (!(rng.uniform() < p.rewire_p)) continue;
      if (adj[u].size() >= n - 1) continue;
      Index w;
      do {
        w = static_cast<Index>(rng.below(n));
      } while (w == u || adj[u].count(w));
      adj[u].erase(v);
      adj[v].erase(static_cast<Index>(u));
      adj[u].insert(w);
      adj[w].insert(static_cast<Index>(u));
    }
  }
  std::vector<std::vector<Index>> nb(n);
  for (std::size_t u = 0; u < n; ++u) nb[u].assign(adj[u].begin(), adj[u].end());
  return GraphStructure(n, nb);
}

GraphStructure add_random_self_loops(const GraphStructure& g, double probability,
                                     std::uint64_t seed) {
  Rng rng(seed, kStreamSelfLoops);
  std::vector<bool> flags(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) flags[i] = rng.uniform() < probability;
  return g.with_self_loops(std::move(flags));
}

NoisyInstance generate_noisy_instance(const GraphStructure& g, const NoiseParams& p) {
  p.validate();
  if (g.has_self_loops()) throw InputError("noisy instance: graph must be loop-less");
  NoisyInstance inst{SparseRowMatrix(g), SparseRowMatrix(g)};
  for (std::size_t i = 0; i < g.n(); ++i) {
    Rng rng(p.seed, kStreamRowBase + i);
    auto xr = inst.x_true.row(i);
    double deg = 0.0;
    for (double& v : xr) {
      const double w = p.weight_scale * rng.uniform_open();
      v = -w;
      deg += w;
    }
    inst.x_true.diag(i) = deg;
    auto ar = inst.a.row(i);
    inst.a.diag(i) = deg + p.noise_scale * rng.normal();
    for (std::size_t k = 0; k < ar.size(); ++k) ar[k] = xr[k] + p.noise_scale * rng.normal();
  }
  return inst;
}

// ---------------------------------------------------------------------------

WorstCaseOptions WorstCaseOptions::for_degree(std::size_t d) {
  WorstCaseOptions opt;
  try {
    worst_case_sequence(d, opt);
  } catch (const DimensionTooLarge&) {
    opt.first_term = -0x1.0p-1000;
  }
  return opt;
}

WorstCaseSequence worst_case_sequence(std::size_t d, const WorstCaseOptions& opt) {
  if (d == 0) throw InputError("worst-case sequence needs d >= 1");
  if (d > kMaxWorstCaseDimension)
    throw DimensionTooLarge("worst-case sequence: d = " + std::to_string(d) + " exceeds " +
                            std::to_string(kMaxWorstCaseDimension));
  if (!(opt.first_term < 0.0)) throw InputError("worst-case sequence: first term must be < 0");
  if (!(opt.relative_slack >= 0.0)) throw InputError("worst-case sequence: slack must be >= 0");
  WorstCaseSequence seq;
  seq.b.reserve(d);
  seq.s.reserve(d);
  seq.b.push_back(opt.first_term);
  seq.s.push_back(opt.first_term);
  for (std::size_t k = 2; k <= d; ++k) {
    const double eq = static_cast<double>(k + 1) * seq.b.back() - seq.s.back();
    const double bk = eq + opt.relative_slack * eq;
    if (!std::isfinite(bk) || !std::isfinite(seq.s.back() + bk))
      throw DimensionTooLarge("worst-case sequence overflows at k = " + std::to_string(k));
    seq.b.push_back(bk);
    seq.s.push_back(seq.s.back() + bk);
  }
  return seq;
}

SparseRowMatrix worst_case_matrix(const GraphStructure& g) {
  return worst_case_matrix(g, WorstCaseOptions::for_degree(std::max<std::size_t>(1, g.max_degree())));
}

SparseRowMatrix worst_case_matrix(const GraphStructure& g, const WorstCaseOptions& opt) {
  SparseRowMatrix a(g);
  std::vector<std::pair<std::size_t, WorstCaseSequence>> cache;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const std::size_t d = g.degree(i);
    if (d == 0) continue;
    auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& e) { return e.first == d; });
    if (it == cache.end()) {
      cache.emplace_back(d, worst_case_sequence(d, opt));
      it = cache.end() - 1;
    }
    auto r = a.row(i);
    for (std::size_t k = 0; k < d; ++k) r[k] = -0.5 * it->second.b[k];
  }
  return a;
}

}  // namespace nearlap
