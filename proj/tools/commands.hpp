#pragma once

// Subcommands of the `nearlap` tool. Each returns a process exit status:
// 0 success, 1 input error, 2 solver failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nearlap/solvers.hpp"

namespace nearlap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitSolver = 2;

struct ProjectOptions {
  std::filesystem::path matrix, graph, out;
  Method method = Method::sort_kkt;
  bool loopy = false;
  std::optional<double> eps;
  bool parallel = false;
};

struct GenWsOptions {
  std::size_t n = 100;
  std::size_t mean_degree = 20;
  double rewire_p = 0.2;
  double self_loop_p = 0.0;
  double weight_scale = 10.0;
  double noise_scale = 5.0;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct GenWorstOptions {
  std::size_t n = 1000;
  std::size_t mean_degree = 30;
  double rewire_p = 0.0;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

struct WorstOptions {
  std::size_t n = 1000;
  std::size_t mean_degree = 30;
  double rewire_p = 0.0;
  std::uint64_t seed = 1;
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::optional<double> eps;
  std::size_t repetitions = 1;
  std::filesystem::path out;
};

struct GenTrajOptions {
  std::filesystem::path graph, out;
  std::size_t runs = 40;
  std::size_t steps = 5;
  double h = 0.1;
  double weight_scale = 1.0;
  std::uint64_t seed = 1;
};

struct IdentifyOptions {
  std::vector<std::filesystem::path> trajectories;
  std::filesystem::path graph, out;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> log;
  std::optional<Method> method;
  bool loopy = false;
};

int cmd_project(const ProjectOptions& o, std::ostream& out, std::ostream& err);
int cmd_gen_ws(const GenWsOptions& o, std::ostream& out, std::ostream& err);
int cmd_gen_worst(const GenWorstOptions& o, std::ostream& out, std::ostream& err);
/// `config` is a key=value manifest; see README for the keys.
int cmd_bench(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_worst(const WorstOptions& o, std::ostream& out, std::ostream& err);
int cmd_gen_traj(const GenTrajOptions& o, std::ostream& out, std::ostream& err);
int cmd_identify(const IdentifyOptions& o, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Benchmark records and plots

struct BenchRecord {
  std::size_t instance_id = 0;
  std::size_t n = 0;
  std::size_t mean_degree = 0;
  Method method = Method::sort_kkt;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t max_row_iterations = 0;
  bool parallel = false;
};

void write_bench_header(std::ostream& out);
void write_bench_record(std::ostream& out, const BenchRecord& r);

struct BoxStats {
  double q1 = 0, median = 0, q3 = 0, whisker_lo = 0, whisker_hi = 0;
  std::vector<double> outliers;
};

/// Quartiles by linear interpolation; whiskers at the most extreme samples
/// within 1.5 IQR of the box.
BoxStats box_stats(std::vector<double> samples);

/// One box per series on a log-scaled axis.
void write_box_plot_svg(std::ostream& out, const std::string& title, const std::string& y_label,
                        const std::vector<std::pair<std::string, std::vector<double>>>& series);

}  // namespace nearlap::cli
