#include "nearlap/sysid.hpp"

#include <algorithm>
#include <cmath>

#include "nearlap/instances.hpp"
#include "nearlap/loopy.hpp"

namespace nearlap {

void TrajectoryData::validate() const {
  if (!(h > 0.0)) throw InputError("trajectory data: h must be > 0");
  if (x.cols == 0) throw InputError("trajectory data: need at least one sample");
  if (x.rows != x_next.rows || x.cols != x_next.cols)
    throw InputError("trajectory data: X and X' differ in shape");
}

TrajectoryData TrajectoryData::from_trajectories(std::span<const Trajectory> runs) {
  if (runs.empty()) throw InputError("trajectory data: no trajectories");
  const double h = runs.front().h;
  const std::size_t n = runs.front().n();
  std::size_t samples = 0;
  for (const auto& r : runs) {
    if (r.h != h) throw InputError("trajectory data: trajectories use different h");
    if (r.n() != n) throw InputError("trajectory data: trajectories differ in dimension");
    if (r.states.size() < 2) throw InputError("trajectory data: trajectory needs two states");
    samples += r.states.size() - 1;
  }
  TrajectoryData d{DenseMatrix(n, samples), DenseMatrix(n, samples), h};
  std::size_t col = 0;
  for (const auto& r : runs) {
    for (std::size_t k = 0; k + 1 < r.states.size(); ++k, ++col) {
      for (std::size_t i = 0; i < n; ++i) {
        d.x(i, col) = r.states[k][i];
        d.x_next(i, col) = r.states[k + 1][i];
      }
    }
  }
  return d;
}

void SysidConfig::validate() const {
  if (step_size && !(*step_size > 0.0)) throw InputError("sysid: step size must be > 0");
  if (!(grad_tol > 0.0)) throw InputError("sysid: grad_tol must be > 0");
}

namespace {

// Objective and gradient are well defined at h = 0 (both constant in L).
void require_dims(const SparseRowMatrix& l, const TrajectoryData& data) {
  if (!(data.h >= 0.0) || !std::isfinite(data.h)) throw InputError("sysid: h must be >= 0");
  if (data.x.rows != data.x_next.rows || data.x.cols != data.x_next.cols)
    throw InputError("trajectory data: X and X' differ in shape");
  if (data.samples() == 0) throw InputError("trajectory data: need at least one sample");
  if (l.n() != data.n()) throw InputError("sysid: Laplacian and data dimensions differ");
}

// R = X′ − (I − hL)X = X′ − X + hLX.
DenseMatrix residual(const SparseRowMatrix& l, const TrajectoryData& data) {
  const std::size_t n = data.n(), N = data.samples();
  DenseMatrix r(n, N);
  for (std::size_t i = 0; i < n; ++i) {
    double* ri = &r.data[i * N];
    const double* xi = &data.x.data[i * N];
    const double* yi = &data.x_next.data[i * N];
    const double lii = l.diag(i);
    for (std::size_t k = 0; k < N; ++k) ri[k] = yi[k] - xi[k] + data.h * lii * xi[k];
    auto cols = l.cols(i);
    auto vals = l.row(i);
    for (std::size_t p = 0; p < cols.size(); ++p) {
      const double w = data.h * vals[p];
      if (w == 0.0) continue;
      const double* xj = &data.x.data[cols[p] * N];
      for (std::size_t k = 0; k < N; ++k) ri[k] += w * xj[k];
    }
  }
  return r;
}

double row_dot(const DenseMatrix& a, std::size_t i, const DenseMatrix& b, std::size_t j) {
  const double* p = &a.data[i * a.cols];
  const double* q = &b.data[j * b.cols];
  double s = 0.0;
  for (std::size_t k = 0; k < a.cols; ++k) s += p[k] * q[k];
  return s;
}

double frobenius_distance(const SparseRowMatrix& a, const SparseRowMatrix& b) {
  return std::sqrt(squared_distance(a, b));
}

SparseRowMatrix project(const SparseRowMatrix& m, const GraphStructure& g, const SysidConfig& cfg) {
  DriverOptions opts;
  opts.execution = cfg.execution;
  if (cfg.loopy) return nearest_loopy_laplacian(m, g, cfg.method, {}, opts).laplacian;
  return nearest_laplacian(m, g, cfg.method, {}, opts).laplacian;
}

}  // namespace

double sysid_objective(const SparseRowMatrix& l, const TrajectoryData& data) {
  require_dims(l, data);
  const DenseMatrix r = residual(l, data);
  double s = 0.0;
  for (double v : r.data) s += v * v;
  return s / static_cast<double>(data.samples());
}

SparseRowMatrix sysid_gradient(const SparseRowMatrix& l, const TrajectoryData& data) {
  require_dims(l, data);
  const DenseMatrix r = residual(l, data);
  const double scale = 2.0 * data.h / static_cast<double>(data.samples());
  SparseRowMatrix g = l;
  for (std::size_t i = 0; i < l.n(); ++i) {
    g.diag(i) = scale * row_dot(r, i, data.x, i);
    auto cols = l.cols(i);
    auto out = g.row(i);
    for (std::size_t p = 0; p < cols.size(); ++p) out[p] = scale * row_dot(r, i, data.x, cols[p]);
  }
  return g;
}

double sysid_lipschitz(const TrajectoryData& data) {
  data.validate();
  const std::size_t n = data.n(), N = data.samples();
  std::vector<double> v(n), w(n), t(N);
  Rng rng(0x5eed, 0);
  for (double& e : v) e = rng.normal();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    double norm = 0.0;
    for (double e : v) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& e : v) e /= norm;
    std::fill(t.begin(), t.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < N; ++k) t[k] += data.x(i, k) * v[i];
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += data.x(i, k) * t[k];
      w[i] = s;
    }
    double next = 0.0;
    for (std::size_t i = 0; i < n; ++i) next += v[i] * w[i];
    v.swap(w);
    if (it > 10 && std::abs(next - lambda) <= 1e-13 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 2.0 * data.h * data.h * lambda / static_cast<double>(N);
}

IdentifyResult identify_laplacian(const TrajectoryData& data, const GraphStructure& g,
                                  const SysidConfig& cfg, const SparseRowMatrix* initial) {
  cfg.validate();
  data.validate();
  if (g.n() != data.n()) throw InputError("sysid: graph and data dimensions differ");
  const GraphStructure pattern = cfg.loopy ? g : g.without_self_loops();

  IdentifyResult res;
  if (initial) {
    initial->require_pattern(g);
    SparseRowMatrix init(pattern);
    for (std::size_t i = 0; i < g.n(); ++i) {
      init.diag(i) = initial->diag(i);
      std::copy(initial->row(i).begin(), initial->row(i).end(), init.row(i).begin());
    }
    res.laplacian = project(init, pattern, cfg);
  } else {
    res.laplacian = project(SparseRowMatrix(pattern), pattern, cfg);
  }

  if (cfg.step_size) {
    res.step_size = *cfg.step_size;
  } else {
    // 1% margin over the power-iteration estimate, which approaches λ_max from below.
    const double lip = 1.01 * sysid_lipschitz(data);
    res.step_size = lip > 0.0 ? 1.0 / lip : 1.0;
  }

  res.objective_history.push_back(sysid_objective(res.laplacian, data));
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    SparseRowMatrix step = sysid_gradient(res.laplacian, data);
    for (std::size_t i = 0; i < step.n(); ++i) {
      step.diag(i) = res.laplacian.diag(i) - res.step_size * step.diag(i);
    }
    auto cur = res.laplacian.values();
    auto vals = step.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = cur[k] - res.step_size * vals[k];
    SparseRowMatrix next = project(step, pattern, cfg);
    res.stationarity = frobenius_distance(res.laplacian, next);
    if (res.stationarity <= cfg.grad_tol) {
      res.converged = true;
      break;
    }
    res.laplacian = std::move(next);
    res.objective_history.push_back(sysid_objective(res.laplacian, data));
    ++res.iterations;
  }
  return res;
}

Trajectory simulate_trajectory(const SparseRowMatrix& l, std::span<const double> x0, double h,
                               std::size_t steps) {
  if (x0.size() != l.n()) throw InputError("simulate: x0 has wrong dimension");
  Trajectory t;
  t.h = h;
  t.states.emplace_back(x0.begin(), x0.end());
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& x = t.states.back();
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < l.n(); ++i) {
      double lx = l.diag(i) * x[i];
      auto cols = l.cols(i);
      auto vals = l.row(i);
      for (std::size_t p = 0; p < cols.size(); ++p) lx += vals[p] * x[cols[p]];
      next[i] = x[i] - h * lx;
    }
    t.states.push_back(std::move(next));
  }
  return t;
}

}  // namespace nearlap
