#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "nearlap/io.hpp"
#include "nearlap/sysid.hpp"

using namespace nearlap;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("nearlap_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "nearlap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("project: 2-node example") {
  TempDir dir;
  write_text(dir / "g.txt", "2 1\n1 2\n");
  write_text(dir / "a.mtx",
             "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n1 2 -2\n2 2 0\n");
  for (const char* m : {"active_set", "sort_kkt", "ip", "vfista"}) {
    const auto r = run({"project", "--matrix", (dir / "a.mtx").string(), "--graph",
                        (dir / "g.txt").string(), "--out", (dir / "l.mtx").string(), "--method",
                        m});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("objective 0.5") != std::string::npos);
    const auto l = read_matrix_market_file(dir / "l.mtx", read_graph_file(dir / "g.txt"));
    CHECK(l.diag(0) == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(l.row(0)[0] == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(l.diag(1) == 0.0);
  }
}

TEST_CASE("project: feasible input is returned") {
  TempDir dir;
  REQUIRE(run({"gen-ws", "--n", "30", "--mean-degree", "4", "--noise-scale", "0", "--out",
               dir.path.string()})
              .code == 0);
  const auto r = run({"project", "--matrix", (dir / "A.mtx").string(), "--graph",
                      (dir / "graph.txt").string(), "--out", (dir / "L.mtx").string()});
  REQUIRE(r.code == 0);
  const auto g = read_graph_file(dir / "graph.txt");
  CHECK(max_abs_difference(read_matrix_market_file(dir / "L.mtx", g),
                           read_matrix_market_file(dir / "X_true.mtx", g)) <= 1e-12);
}

TEST_CASE("project: errors") {
  TempDir dir;
  write_text(dir / "g.txt", "2 1\n1 2\n");
  write_text(dir / "bad.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n2 1 4\n");
  auto r = run({"project", "--matrix", (dir / "bad.mtx").string(), "--graph",
                (dir / "g.txt").string(), "--out", (dir / "l.mtx").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(!fs::exists(dir / "l.mtx"));
  CHECK(!r.err.empty());

  r = run({"project", "--matrix", (dir / "missing.mtx").string(), "--graph",
           (dir / "g.txt").string(), "--out", (dir / "l.mtx").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(run({"project", "--graph", "x"}).code == cli::kExitInput);
  CHECK(run({"frobnicate"}).code == cli::kExitInput);
  CHECK(run({}).code == cli::kExitInput);
  CHECK(run({"--help"}).code == cli::kExitOk);

  write_text(dir / "a.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 -2\n");
  r = run({"project", "--matrix", (dir / "a.mtx").string(), "--graph", (dir / "g.txt").string(),
           "--out", (dir / "l.mtx").string(), "--method", "newton"});
  CHECK(r.code == cli::kExitInput);

  write_text(dir / "gl.txt", "2 2\n1 1\n1 2\n");
  r = run({"project", "--matrix", (dir / "a.mtx").string(), "--graph", (dir / "gl.txt").string(),
           "--out", (dir / "l.mtx").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find("--loopy") != std::string::npos);
  r = run({"project", "--matrix", (dir / "a.mtx").string(), "--graph", (dir / "gl.txt").string(),
           "--out", (dir / "l.mtx").string(), "--loopy"});
  CHECK(r.code == cli::kExitOk);
}

TEST_CASE("bench writes one record per instance and method") {
  TempDir dir;
  write_text(dir / "cfg.txt", "n=40\nmean_degree=6\nrepetitions=3\nseed=5\nout=" +
                                  (dir / "out").string() + "\n");
  const auto r = run({"bench", "--config", (dir / "cfg.txt").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(line_count(dir / "out" / "bench.csv") == 1 + 3 * 4);
  CHECK(fs::exists(dir / "out" / "bench_time.svg"));
  const auto m = read_manifest_file(dir / "out" / "manifest.txt");
  CHECK(m.at("repetitions") == "3");
  CHECK(m.at("seed") == "5");
  CHECK(r.out.find("objective_disagreements 0") != std::string::npos);

  write_text(dir / "bad.txt", "n=40\nflavour=mint\n");
  CHECK(run({"bench", "--config", (dir / "bad.txt").string()}).code == cli::kExitInput);
}

TEST_CASE("worst logs d active-set iterations per row") {
  TempDir dir;
  const auto r = run({"worst", "--n", "80", "--mean-degree", "30", "--methods",
                      "active_set,sort_kkt", "--out", (dir / "w.csv").string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("rows with iterations = degree 80/80") != std::string::npos);
  CHECK(line_count(dir / "w.csv") == 3);
  CHECK(run({"worst", "--n", "2000", "--mean-degree", "950", "--methods", "sort_kkt", "--out",
             (dir / "w2.csv").string()})
            .code == cli::kExitInput);
}

TEST_CASE("identify") {
  TempDir dir;
  REQUIRE(run({"gen-ws", "--n", "12", "--mean-degree", "4", "--out", (dir / "ws").string()}).code ==
          0);
  REQUIRE(run({"gen-traj", "--graph", (dir / "ws" / "graph.txt").string(), "--runs", "12",
               "--steps", "5", "--out", (dir / "tr").string()})
              .code == 0);
  std::vector<std::string> args{"identify", "--graph", (dir / "ws" / "graph.txt").string(),
                                "--out", (dir / "L.mtx").string(), "--log",
                                (dir / "log.csv").string()};
  for (std::size_t r = 1; r <= 12; ++r) {
    args.push_back("--trajectory");
    args.push_back((dir / "tr" / ("traj_0" + std::string(r < 10 ? "0" : "") + std::to_string(r) +
                                  ".csv"))
                       .string());
  }
  write_text(dir / "cfg.txt", "grad_tol=1e-12\nmax_iter=50000\n");
  auto withcfg = args;
  withcfg.insert(withcfg.end(), {"--config", (dir / "cfg.txt").string()});
  auto r = run(withcfg);
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("converged true") != std::string::npos);
  const auto g = read_graph_file(dir / "ws" / "graph.txt");
  const auto truth = read_matrix_market_file(dir / "tr" / "L_true.mtx", g);
  const auto fit = read_matrix_market_file(dir / "L.mtx", g);
  CHECK(std::sqrt(squared_distance(fit, truth) / squared_distance(truth, SparseRowMatrix(g))) <=
        1e-4);
  CHECK(line_count(dir / "log.csv") >= 2);

  write_text(dir / "zero.txt", "max_iter=0\n");
  auto zero = args;
  zero.insert(zero.end(), {"--config", (dir / "zero.txt").string()});
  r = run(zero);
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("iterations 0") != std::string::npos);
  CHECK(line_count(dir / "log.csv") == 2);
  CHECK(read_matrix_market_file(dir / "L.mtx", g) == SparseRowMatrix(g));

  auto text = [&] {
    std::ifstream in(dir / "tr" / "traj_001.csv");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }();
  write_text(dir / "nohead.csv", text.substr(text.find('\n') + 1));
  r = run({"identify", "--graph", (dir / "ws" / "graph.txt").string(), "--out",
           (dir / "L2.mtx").string(), "--trajectory", (dir / "nohead.csv").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(!fs::exists(dir / "L2.mtx"));
}

TEST_CASE("box statistics") {
  const auto st = cli::box_stats({1, 2, 3, 4, 5, 6, 7, 8, 100});
  CHECK(st.median == 5.0);
  CHECK(st.q1 == 3.0);
  CHECK(st.q3 == 7.0);
  CHECK(st.whisker_lo == 1.0);
  CHECK(st.whisker_hi == 8.0);
  CHECK(st.outliers == std::vector<double>{100.0});
  std::ostringstream svg;
  cli::write_box_plot_svg(svg, "t", "ms", {{"a", {1.0, 2.0}}, {"b", {}}});
  CHECK(svg.str().find("<svg") == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}
