#include <CLI11.hpp>

#include <ostream>

#include "commands.hpp"

namespace nearlap::cli {

namespace {

struct Parsed {
  ProjectOptions project;
  GenWsOptions gen_ws;
  GenWorstOptions gen_worst;
  std::filesystem::path bench_config;
  WorstOptions worst;
  GenTrajOptions gen_traj;
  IdentifyOptions identify;
  std::string method = "sort_kkt";
  std::string identify_method;
  std::string worst_methods = "active_set,sort_kkt,ip,vfista";
  double eps = 0.0;
};

std::vector<Method> split_methods(const std::string& list) {
  std::vector<Method> ms;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const std::size_t comma = std::min(list.find(',', pos), list.size());
    if (comma > pos) ms.push_back(parse_method(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (ms.empty()) throw InputError("empty method list");
  return ms;
}

int run_unguarded(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nearest Laplacian projection, instance generators and system identification",
               "nearlap"};
  app.require_subcommand(1);
  Parsed p;

  auto* project = app.add_subcommand("project", "Project a matrix onto the Laplacian set");
  project->add_option("--matrix", p.project.matrix, "Matrix Market input")->required();
  project->add_option("--graph", p.project.graph, "Edge-list graph file")->required();
  project->add_option("--out", p.project.out, "Matrix Market output")->required();
  project->add_option("--method", p.method, "active_set | sort_kkt | ip | vfista");
  project->add_flag("--loopy", p.project.loopy, "Use the loopy feasible set");
  auto* project_eps = project->add_option("--eps", p.eps, "Tolerance for ip and vfista");
  project->add_flag("--parallel", p.project.parallel, "Distribute rows over OpenMP threads");

  auto* gen_ws = app.add_subcommand("gen-ws", "Noisy Laplacian on a Watts-Strogatz graph");
  gen_ws->add_option("--n", p.gen_ws.n);
  gen_ws->add_option("--mean-degree", p.gen_ws.mean_degree);
  gen_ws->add_option("--rewire-p", p.gen_ws.rewire_p);
  gen_ws->add_option("--self-loop-p", p.gen_ws.self_loop_p);
  gen_ws->add_option("--weight-scale", p.gen_ws.weight_scale);
  gen_ws->add_option("--noise-scale", p.gen_ws.noise_scale);
  gen_ws->add_option("--seed", p.gen_ws.seed);
  gen_ws->add_option("--out", p.gen_ws.out, "Output directory")->required();

  auto* gen_worst = app.add_subcommand("gen-worst", "Worst-case instance for the active set");
  gen_worst->add_option("--n", p.gen_worst.n);
  gen_worst->add_option("--mean-degree", p.gen_worst.mean_degree);
  gen_worst->add_option("--rewire-p", p.gen_worst.rewire_p);
  gen_worst->add_option("--seed", p.gen_worst.seed);
  gen_worst->add_option("--out", p.gen_worst.out, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Timing study over random instances");
  bench->add_option("--config", p.bench_config, "key=value config file")->required();

  auto* worst = app.add_subcommand("worst", "Time all methods on a worst-case instance");
  worst->add_option("--n", p.worst.n);
  worst->add_option("--mean-degree", p.worst.mean_degree);
  worst->add_option("--rewire-p", p.worst.rewire_p);
  worst->add_option("--seed", p.worst.seed);
  worst->add_option("--methods", p.worst_methods, "Comma-separated method list");
  worst->add_option("--repetitions", p.worst.repetitions);
  auto* worst_eps = worst->add_option("--eps", p.eps);
  worst->add_option("--out", p.worst.out, "CSV output")->required();

  auto* gen_traj = app.add_subcommand("gen-traj", "Simulate trajectories of a random Laplacian");
  gen_traj->add_option("--graph", p.gen_traj.graph)->required();
  gen_traj->add_option("--runs", p.gen_traj.runs);
  gen_traj->add_option("--steps", p.gen_traj.steps);
  gen_traj->add_option("--dt", p.gen_traj.h, "Sampling interval h");
  gen_traj->add_option("--weight-scale", p.gen_traj.weight_scale);
  gen_traj->add_option("--seed", p.gen_traj.seed);
  gen_traj->add_option("--out", p.gen_traj.out, "Output directory")->required();

  auto* identify = app.add_subcommand("identify", "Fit a Laplacian to trajectory data");
  identify->add_option("--trajectory", p.identify.trajectories, "Trajectory CSV (repeatable)")
      ->required();
  identify->add_option("--graph", p.identify.graph)->required();
  identify->add_option("--out", p.identify.out, "Matrix Market output")->required();
  auto* identify_config = identify->add_option("--config", p.identify.config.emplace());
  auto* identify_log = identify->add_option("--log", p.identify.log.emplace(), "Convergence CSV");
  identify->add_option("--method", p.identify_method);
  identify->add_flag("--loopy", p.identify.loopy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*project) {
      p.project.method = parse_method(p.method);
      if (*project_eps) p.project.eps = p.eps;
      return cmd_project(p.project, out, err);
    }
    if (*gen_ws) return cmd_gen_ws(p.gen_ws, out, err);
    if (*gen_worst) return cmd_gen_worst(p.gen_worst, out, err);
    if (*bench) return cmd_bench(p.bench_config, out, err);
    if (*worst) {
      p.worst.methods = split_methods(p.worst_methods);
      if (*worst_eps) p.worst.eps = p.eps;
      return cmd_worst(p.worst, out, err);
    }
    if (*gen_traj) return cmd_gen_traj(p.gen_traj, out, err);
    if (*identify) {
      if (!*identify_config) p.identify.config.reset();
      if (!*identify_log) p.identify.log.reset();
      if (!p.identify_method.empty()) p.identify.method = parse_method(p.identify_method);
      return cmd_identify(p.identify, out, err);
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInput;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run_unguarded(argc, argv, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace nearlap::cli
