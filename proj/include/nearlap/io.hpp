#pragma once

// Text formats. Indices in files are 1-based.
//
//   graph file      line 1 "n m", then m lines "i j" (arc i→j; "i i" is a self-loop)
//   matrix file     Matrix Market "coordinate real general"; only entries on
//                   the graph pattern or the diagonal are accepted
//   manifest        flat "key=value" lines; '#' starts a comment
//   trajectory CSV  line 1 "h=<value>", then n rows of comma-separated values,
//                   column k holding the state x_k

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "nearlap/core.hpp"

namespace nearlap {

GraphStructure read_graph(std::istream& in);
GraphStructure read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const GraphStructure& g);
void write_graph_file(const std::filesystem::path& path, const GraphStructure& g);

SparseRowMatrix read_matrix_market(std::istream& in, const GraphStructure& g);
SparseRowMatrix read_matrix_market_file(const std::filesystem::path& path,
                                        const GraphStructure& g);
/// Writes every pattern and diagonal slot (zeros included) with round-trip
/// precision.
void write_matrix_market(std::ostream& out, const SparseRowMatrix& m);
void write_matrix_market_file(const std::filesystem::path& path, const SparseRowMatrix& m);

using Manifest = std::map<std::string, std::string>;

Manifest read_manifest(std::istream& in);
Manifest read_manifest_file(const std::filesystem::path& path);
void write_manifest(std::ostream& out, const Manifest& m);
void write_manifest_file(const std::filesystem::path& path, const Manifest& m);

/// Dense column-major-by-state trajectory: states[k] is x_k (length n).
struct Trajectory {
  double h = 0.0;
  std::vector<std::vector<double>> states;

  std::size_t n() const noexcept { return states.empty() ? 0 : states.front().size(); }
};

Trajectory read_trajectory(std::istream& in);
Trajectory read_trajectory_file(const std::filesystem::path& path);
void write_trajectory(std::ostream& out, const Trajectory& t);
void write_trajectory_file(const std::filesystem::path& path, const Trajectory& t);

}  // namespace nearlap
