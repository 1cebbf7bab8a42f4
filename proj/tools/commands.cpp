#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "nearlap/instances.hpp"
#include "nearlap/io.hpp"
#include "nearlap/loopy.hpp"
#include "nearlap/sysid.hpp"

namespace nearlap::cli {

namespace fs = std::filesystem;

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DimensionTooLarge& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

SolverConfig config_with_eps(std::optional<double> eps) {
  SolverConfig cfg;
  if (eps) {
    cfg.ip_epsilon = *eps;
    cfg.vfista_epsilon = *eps;
  }
  cfg.validate();
  return cfg;
}

std::string methods_string(const std::vector<Method>& ms) {
  std::string s;
  for (Method m : ms) {
    if (!s.empty()) s += ',';
    s += method_name(m);
  }
  return s;
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> ms;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (!tok.empty()) ms.push_back(parse_method(tok));
  }
  if (ms.empty()) throw InputError("empty method list");
  return ms;
}

// Typed lookups into a key=value config; every key read is erased so that
// leftovers can be reported as unknown.
class ConfigReader {
 public:
  explicit ConfigReader(Manifest m) : m_(std::move(m)) {}

  std::string str(const std::string& key, std::string fallback) {
    auto it = m_.find(key);
    if (it == m_.end()) return fallback;
    std::string v = it->second;
    m_.erase(it);
    return v;
  }
  double real(const std::string& key, double fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw InputError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    if (v.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("config key '" + key + "': expected a nonnegative integer, got '" + v + "'");
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw InputError("config key '" + key + "': integer out of range");
    }
  }
  bool boolean(const std::string& key, bool fallback) {
    const std::string v = str(key, "");
    if (v.empty()) return fallback;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("config key '" + key + "': expected true/false, got '" + v + "'");
  }
  void finish() const {
    if (!m_.empty()) throw InputError("unknown config key '" + m_.begin()->first + "'");
  }

 private:
  Manifest m_;
};

}  // namespace

// ---------------------------------------------------------------------------
// project

int cmd_project(const ProjectOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverConfig cfg = config_with_eps(o.eps);
    const GraphStructure g = read_graph_file(o.graph);
    const SparseRowMatrix a = read_matrix_market_file(o.matrix, g);
    if (!o.loopy && g.has_self_loops())
      throw InputError("graph has self-loops; pass --loopy for the loopy projection");
    DriverOptions opts;
    opts.row_residuals = true;
    opts.execution = o.parallel ? ExecutionPolicy::parallel : ExecutionPolicy::serial;

    SparseRowMatrix l;
    std::vector<RowSummary> rows;
    if (o.loopy) {
      auto r = nearest_loopy_laplacian(a, g, o.method, cfg, opts);
      l = std::move(r.laplacian);
      rows = std::move(r.rows);
    } else {
      auto r = nearest_laplacian(a, g, o.method, cfg, opts);
      l = std::move(r.laplacian);
      rows = std::move(r.rows);
    }
    const auto cert = validate_laplacian(l, g, o.loopy);
    std::size_t max_iter = 0;
    double max_kkt = 0.0;
    std::vector<std::size_t> capped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      max_iter = std::max(max_iter, rows[i].iterations);
      max_kkt = std::max(max_kkt, rows[i].kkt_residual);
      if (!rows[i].converged) capped.push_back(i);
    }
    write_matrix_market_file(o.out, l);

    out << "method " << method_name(o.method) << '\n';
    out << "loopy " << (o.loopy ? "true" : "false") << '\n';
    out << "rows " << g.n() << '\n';
    out << "objective " << fmt(squared_distance(a, l)) << '\n';
    out << "max_sign_violation " << cert.max_sign_violation << '\n';
    out << "max_row_sum_violation " << cert.max_row_sum_violation << '\n';
    out << "max_kkt_residual " << max_kkt << '\n';
    out << "max_row_iterations " << max_iter << '\n';
    out << "output " << o.out.string() << '\n';
    if (!capped.empty()) {
      for (std::size_t i : capped)
        err << "row " << i + 1 << ": iteration cap reached before the stopping rule\n";
      return kExitSolver;
    }
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// generators

int cmd_gen_ws(const GenWsOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const WSParams wp{o.n, o.mean_degree, o.rewire_p, o.seed};
    const NoiseParams np{o.weight_scale, o.noise_scale, o.seed};
    if (!(o.self_loop_p >= 0.0 && o.self_loop_p <= 1.0))
      throw InputError("self-loop probability must lie in [0, 1]");
    const GraphStructure base = generate_ws_graph(wp);
    const NoisyInstance inst = generate_noisy_instance(base, np);
    const GraphStructure g = o.self_loop_p > 0.0 ? add_random_self_loops(base, o.self_loop_p, o.seed)
                                                 : base;
    ensure_dir(o.out);
    write_graph_file(o.out / "graph.txt", g);
    write_matrix_market_file(o.out / "A.mtx", inst.a);
    write_matrix_market_file(o.out / "X_true.mtx", inst.x_true);
    write_manifest_file(o.out / "manifest.txt",
                        {{"generator", "ws"},
                         {"n", std::to_string(o.n)},
                         {"mean_degree", std::to_string(o.mean_degree)},
                         {"rewire_p", fmt(o.rewire_p)},
                         {"self_loop_p", fmt(o.self_loop_p)},
                         {"weight_scale", fmt(o.weight_scale)},
                         {"noise_scale", fmt(o.noise_scale)},
                         {"seed", std::to_string(o.seed)}});
    out << "wrote " << (o.out / "graph.txt").string() << ", A.mtx, X_true.mtx, manifest.txt ("
        << g.edge_count() << " edges, " << g.self_loop_count() << " self-loops)\n";
    return kExitOk;
  });
}

int cmd_gen_worst(const GenWorstOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GraphStructure g = generate_ws_graph({o.n, o.mean_degree, o.rewire_p, o.seed});
    const SparseRowMatrix a = worst_case_matrix(g);
    ensure_dir(o.out);
    write_graph_file(o.out / "graph.txt", g);
    write_matrix_market_file(o.out / "A.mtx", a);
    const auto opt = WorstCaseOptions::for_degree(std::max<std::size_t>(1, g.max_degree()));
    write_manifest_file(o.out / "manifest.txt",
                        {{"generator", "worst_case"},
                         {"n", std::to_string(o.n)},
                         {"mean_degree", std::to_string(o.mean_degree)},
                         {"rewire_p", fmt(o.rewire_p)},
                         {"seed", std::to_string(o.seed)},
                         {"first_term", fmt(opt.first_term)},
                         {"relative_slack", fmt(opt.relative_slack)}});
    out << "wrote " << (o.out / "graph.txt").string() << ", A.mtx, manifest.txt (max degree "
        << g.max_degree() << ")\n";
    return kExitOk;
  });
}

int cmd_gen_traj(const GenTrajOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!(o.h > 0.0)) throw InputError("h must be > 0");
    if (o.runs == 0 || o.steps == 0) throw InputError("runs and steps must be positive");
    const GraphStructure g = read_graph_file(o.graph).without_self_loops();
    const SparseRowMatrix l = generate_noisy_instance(g, {o.weight_scale, 0.0, o.seed}).x_true;
    ensure_dir(o.out);
    write_matrix_market_file(o.out / "L_true.mtx", l);
    for (std::size_t r = 0; r < o.runs; ++r) {
      Rng rng(o.seed, (1ULL << 61) + r);
      std::vector<double> x0(g.n());
      for (double& v : x0) v = rng.normal();
      std::ostringstream name;
      name << "traj_" << std::setw(3) << std::setfill('0') << r + 1 << ".csv";
      write_trajectory_file(o.out / name.str(), simulate_trajectory(l, x0, o.h, o.steps));
    }
    write_manifest_file(o.out / "manifest.txt", {{"generator", "trajectories"},
                                                 {"graph", o.graph.string()},
                                                 {"runs", std::to_string(o.runs)},
                                                 {"steps", std::to_string(o.steps)},
                                                 {"h", fmt(o.h)},
                                                 {"weight_scale", fmt(o.weight_scale)},
                                                 {"seed", std::to_string(o.seed)}});
    out << "wrote L_true.mtx and " << o.runs << " trajectories to " << o.out.string() << '\n';
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// bench

void write_bench_header(std::ostream& out) {
  out << "instance_id,n,mean_degree,method,seed,wall_time_ms,objective,kkt_residual,"
         "max_row_iterations,parallel\n";
}

void write_bench_record(std::ostream& out, const BenchRecord& r) {
  out << r.instance_id << ',' << r.n << ',' << r.mean_degree << ',' << method_name(r.method) << ','
      << r.seed << ',' << fmt(r.wall_time_ms) << ',' << fmt(r.objective) << ','
      << fmt(r.kkt_residual) << ',' << r.max_row_iterations << ','
      << (r.parallel ? "true" : "false") << '\n';
}

int cmd_bench(const fs::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigReader c(read_manifest_file(config));
    const std::size_t n = c.integer("n", 100);
    const std::size_t mean_degree = c.integer("mean_degree", 20);
    const double rewire_p = c.real("rewire_p", 0.2);
    const std::size_t reps = c.integer("repetitions", 100);
    const std::uint64_t seed = c.integer("seed", 1);
    const std::vector<Method> methods = parse_methods(c.str("methods", "active_set,sort_kkt,ip,vfista"));
    const double weight_scale = c.real("weight_scale", 10.0);
    const double noise_scale = c.real("noise_scale", 5.0);
    const double eps = c.real("eps", 1e-6);
    const bool parallel = c.boolean("parallel", false);
    const fs::path dir = c.str("out", "bench_out");
    c.finish();
    if (reps == 0) throw InputError("repetitions must be positive");
    const SolverConfig cfg = config_with_eps(eps);

    ensure_dir(dir);
    write_manifest_file(dir / "manifest.txt",
                        {{"n", std::to_string(n)},
                         {"mean_degree", std::to_string(mean_degree)},
                         {"rewire_p", fmt(rewire_p)},
                         {"repetitions", std::to_string(reps)},
                         {"seed", std::to_string(seed)},
                         {"instance_seeds", "seed + instance_id"},
                         {"methods", methods_string(methods)},
                         {"weight_scale", fmt(weight_scale)},
                         {"noise_scale", fmt(noise_scale)},
                         {"eps", fmt(eps)},
                         {"parallel", parallel ? "true" : "false"},
                         {"out", dir.string()}});
    auto csv = open_out(dir / "bench.csv");
    write_bench_header(csv);

    DriverOptions opts;
    opts.execution = parallel ? ExecutionPolicy::parallel : ExecutionPolicy::serial;
    std::map<Method, std::vector<double>> times;
    std::size_t failures = 0, disagreements = 0, infeasible = 0;
    const double agree_tol = 10.0 * eps;
    for (std::size_t id = 0; id < reps; ++id) {
      const std::uint64_t s = seed + id;
      try {
        const GraphStructure g = generate_ws_graph({n, mean_degree, rewire_p, s});
        const NoisyInstance inst = generate_noisy_instance(g, {weight_scale, noise_scale, s});
        std::vector<BenchRecord> recs;
        double f_exact = std::numeric_limits<double>::quiet_NaN();
        for (Method m : methods) {
          const auto t0 = std::chrono::steady_clock::now();
          const ProjectionResult r = nearest_laplacian(inst.a, g, m, cfg, opts);
          const double ms = elapsed_ms(t0);
          BenchRecord rec{id, n, mean_degree, m, s, ms, squared_distance(inst.a, r.laplacian),
                          laplacian_kkt_residual(inst.a, r.laplacian), r.max_iterations(), parallel};
          if (!validate_laplacian(r.laplacian, g, false).ok(1e-12)) ++infeasible;
          if (m == Method::active_set || m == Method::sort_kkt) {
            if (std::isnan(f_exact))
              f_exact = rec.objective;
            else if (std::abs(rec.objective - f_exact) > 1e-10 * std::max(1.0, std::abs(f_exact)))
              ++disagreements;
          }
          recs.push_back(rec);
        }
        if (std::isnan(f_exact)) f_exact = recs.front().objective;
        for (const auto& rec : recs) {
          if (std::abs(rec.objective - f_exact) > agree_tol * std::max(1.0, std::abs(f_exact)))
            ++disagreements;
          write_bench_record(csv, rec);
          times[rec.method].push_back(rec.wall_time_ms);
        }
        csv.flush();
      } catch (const std::exception& e) {
        ++failures;
        csv.flush();
        err << "instance " << id << " (seed " << s << "): " << e.what() << '\n';
      }
    }

    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (Method m : methods) series.emplace_back(std::string(method_name(m)), times[m]);
    {
      auto svg = open_out(dir / "bench_time.svg");
      std::ostringstream title;
      title << "Nearest Laplacian, n = " << n << ", mean degree " << mean_degree << ", " << reps
            << " instances";
      write_box_plot_svg(svg, title.str(), "wall time [ms]", series);
    }

    out << "wrote " << (dir / "bench.csv").string() << ", bench_time.svg, manifest.txt\n";
    for (const auto& [name, ts] : series) {
      if (ts.empty()) continue;
      const auto st = box_stats(ts);
      out << "median_ms " << name << ' ' << st.median << '\n';
    }
    out << "objective_disagreements " << disagreements << '\n';
    out << "infeasible_outputs " << infeasible << '\n';
    out << "failed_instances " << failures << '\n';
    return (failures || disagreements || infeasible) ? kExitSolver : kExitOk;
  });
}

// ---------------------------------------------------------------------------
// worst

int cmd_worst(const WorstOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SolverConfig cfg = config_with_eps(o.eps);
    if (o.repetitions == 0) throw InputError("repetitions must be positive");
    const GraphStructure g = generate_ws_graph({o.n, o.mean_degree, o.rewire_p, o.seed});
    const SparseRowMatrix a = worst_case_matrix(g);
    auto csv = open_out(o.out);
    csv << "method,n,mean_degree,repetition,wall_time_ms,objective,max_row_iterations,"
           "rows_with_iterations_equal_degree,rows\n";
    bool ok = true;
    for (Method m : o.methods) {
      for (std::size_t rep = 0; rep < o.repetitions; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        const ProjectionResult r = nearest_laplacian(a, g, m, cfg);
        const double ms = elapsed_ms(t0);
        std::size_t equal = 0;
        for (std::size_t i = 0; i < g.n(); ++i)
          if (r.rows[i].iterations == g.degree(i)) ++equal;
        csv << method_name(m) << ',' << o.n << ',' << o.mean_degree << ',' << rep << ','
            << fmt(ms) << ',' << fmt(squared_distance(a, r.laplacian)) << ','
            << r.max_iterations() << ',' << equal << ',' << g.n() << '\n';
        if (rep == 0) {
          out << method_name(m) << ": " << ms << " ms, max row iterations " << r.max_iterations();
          if (m == Method::active_set) out << ", rows with iterations = degree " << equal << '/' << g.n();
          out << '\n';
        }
        if (m == Method::active_set && equal != g.n()) {
          ok = false;
          err << "active set: " << g.n() - equal << " rows did not take exactly d iterations\n";
        }
        if (m == Method::sort_kkt && !(r.laplacian == SparseRowMatrix(g))) {
          ok = false;
          err << "sort_kkt: worst-case optimum is not x* = 0\n";
        }
      }
    }
    out << "wrote " << o.out.string() << '\n';
    return ok ? kExitOk : kExitSolver;
  });
}

// ---------------------------------------------------------------------------
// identify

int cmd_identify(const IdentifyOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SysidConfig cfg;
    if (o.config) {
      ConfigReader c(read_manifest_file(*o.config));
      const std::string step = c.str("step_size", "auto");
      if (step != "auto") cfg.step_size = ConfigReader({{"step_size", step}}).real("step_size", 0.0);
      cfg.max_iter = c.integer("max_iter", cfg.max_iter);
      cfg.grad_tol = c.real("grad_tol", cfg.grad_tol);
      cfg.loopy = c.boolean("loopy", cfg.loopy);
      cfg.method = parse_method(c.str("method", std::string(method_name(cfg.method))));
      cfg.execution = c.boolean("parallel", false) ? ExecutionPolicy::parallel
                                                   : ExecutionPolicy::serial;
      c.finish();
    }
    if (o.loopy) cfg.loopy = true;
    if (o.method) cfg.method = *o.method;
    cfg.validate();

    const GraphStructure g = read_graph_file(o.graph);
    if (!cfg.loopy && g.has_self_loops())
      throw InputError("graph has self-loops; pass --loopy for the loopy projection");
    if (o.trajectories.empty()) throw InputError("no trajectory files given");
    std::vector<Trajectory> runs;
    for (const auto& p : o.trajectories) {
      try {
        runs.push_back(read_trajectory_file(p));
      } catch (const InputError& e) {
        throw InputError(p.string() + ": " + e.what());
      }
    }
    const TrajectoryData data = TrajectoryData::from_trajectories(runs);
    const IdentifyResult res = identify_laplacian(data, g, cfg);
    write_matrix_market_file(o.out, res.laplacian);
    if (o.log) {
      auto log = open_out(*o.log);
      log << "iteration,objective\n";
      for (std::size_t k = 0; k < res.objective_history.size(); ++k)
        log << k << ',' << fmt(res.objective_history[k]) << '\n';
    }
    out << "samples " << data.samples() << '\n';
    out << "step_size " << fmt(res.step_size) << '\n';
    out << "iterations " << res.iterations << '\n';
    out << "converged " << (res.converged ? "true" : "false") << '\n';
    out << "stationarity " << res.stationarity << '\n';
    out << "objective " << fmt(res.objective_history.back()) << '\n';
    out << "output " << o.out.string() << '\n';
    if (!res.converged) err << "note: stopped at the iteration cap (max_iter = " << cfg.max_iter << ")\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// box plots

BoxStats box_stats(std::vector<double> v) {
  BoxStats st;
  if (v.empty()) return st;
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  st.q1 = quantile(0.25);
  st.median = quantile(0.5);
  st.q3 = quantile(0.75);
  const double iqr = st.q3 - st.q1;
  const double lo_fence = st.q1 - 1.5 * iqr, hi_fence = st.q3 + 1.5 * iqr;
  st.whisker_lo = st.q1;
  st.whisker_hi = st.q3;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      st.outliers.push_back(x);
    } else {
      st.whisker_lo = std::min(st.whisker_lo, x);
      st.whisker_hi = std::max(st.whisker_hi, x);
    }
  }
  return st;
}

void write_box_plot_svg(std::ostream& out, const std::string& title, const std::string& y_label,
                        const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  const double left = 80, right = 20, top = 40, bottom = 50, box_w = 60, slot = 120, plot_h = 320;
  const double width = left + right + slot * static_cast<double>(std::max<std::size_t>(1, series.size()));
  const double height = top + plot_h + bottom;

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [_, v] : series)
    for (double x : v)
      if (x > 0.0) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
  if (!(hi > 0.0)) {
    lo = 1e-3;
    hi = 1.0;
  }
  const double e_lo = std::floor(std::log10(lo)), e_hi = std::max(e_lo + 1, std::ceil(std::log10(hi)));
  auto y = [&](double v) {
    const double t = (std::log10(std::max(v, std::pow(10.0, e_lo))) - e_lo) / (e_hi - e_lo);
    return top + plot_h * (1.0 - t);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<text transform=\"translate(16," << top + plot_h / 2 << ") rotate(-90)\" "
      << "text-anchor=\"middle\">" << y_label << "</text>\n";
  for (double e = e_lo; e <= e_hi; e += 1.0) {
    const double yy = y(std::pow(10.0, e));
    out << "<line x1=\"" << left << "\" x2=\"" << width - right << "\" y1=\"" << yy << "\" y2=\""
        << yy << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << yy + 4 << "\" text-anchor=\"end\">1e"
        << static_cast<int>(e) << "</text>\n";
  }
  out << "<line x1=\"" << left << "\" x2=\"" << left << "\" y1=\"" << top << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const double cx = left + slot * (static_cast<double>(s) + 0.5);
    out << "<text x=\"" << cx << "\" y=\"" << top + plot_h + 20 << "\" text-anchor=\"middle\">"
        << series[s].first << "</text>\n";
    if (series[s].second.empty()) continue;
    const BoxStats st = box_stats(series[s].second);
    const double x0 = cx - box_w / 2, x1 = cx + box_w / 2;
    out << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << y(st.whisker_lo) << "\" y2=\""
        << y(st.q1) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << y(st.q3) << "\" y2=\""
        << y(st.whisker_hi) << "\" stroke=\"black\"/>\n";
    for (double w : {st.whisker_lo, st.whisker_hi})
      out << "<line x1=\"" << cx - box_w / 4 << "\" x2=\"" << cx + box_w / 4 << "\" y1=\"" << y(w)
          << "\" y2=\"" << y(w) << "\" stroke=\"black\"/>\n";
    out << "<rect x=\"" << x0 << "\" y=\"" << y(st.q3) << "\" width=\"" << box_w << "\" height=\""
        << std::max(1.0, y(st.q1) - y(st.q3)) << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x0 << "\" x2=\"" << x1 << "\" y1=\"" << y(st.median) << "\" y2=\""
        << y(st.median) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    for (double v : st.outliers)
      out << "<circle cx=\"" << cx << "\" cy=\"" << y(v) << "\" r=\"3\" fill=\"none\" "
          << "stroke=\"black\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace nearlap::cli
