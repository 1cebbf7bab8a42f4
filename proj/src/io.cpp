#include "nearlap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace nearlap {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_blank(const std::string& line) { return trim(line).empty(); }

double parse_double(std::string_view tok, const std::string& where) {
  const std::string t = trim(tok);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": cannot parse number '" + t + "'");
  }
}

std::uint64_t parse_index(const std::string& tok, const std::string& where) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw InputError(where + ": cannot parse integer '" + tok + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph

GraphStructure read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!is_blank(line) && trim(line)[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw InputError("graph file: missing header");
  std::istringstream hdr(line);
  std::string ns, ms, extra;
  if (!(hdr >> ns >> ms) || (hdr >> extra)) throw InputError("graph file: header must be 'n m'");
  const auto n = parse_index(ns, "graph file line 1");
  const auto m = parse_index(ms, "graph file line 1");
  if (n == 0 || n > std::numeric_limits<Index>::max()) throw InputError("graph file: bad n");

  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(m);
  for (std::uint64_t e = 0; e < m; ++e) {
    if (!next_line()) throw InputError("graph file: expected " + std::to_string(m) + " edges");
    const std::string where = "graph file line " + std::to_string(lineno);
    std::istringstream ls(line);
    std::string is, js;
    if (!(ls >> is >> js) || (ls >> extra)) throw InputError(where + ": expected 'i j'");
    const auto i = parse_index(is, where);
    const auto j = parse_index(js, where);
    if (i < 1 || i > n || j < 1 || j > n) throw InputError(where + ": index out of range");
    edges.emplace_back(static_cast<Index>(i - 1), static_cast<Index>(j - 1));
  }
  if (next_line()) throw InputError("graph file: more edge lines than m");
  return GraphStructure::from_edges(n, edges);
}

GraphStructure read_graph_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const GraphStructure& g) {
  out << g.n() << ' ' << (g.edge_count() + g.self_loop_count()) << '\n';
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (g.has_self_loop(i)) out << i + 1 << ' ' << i + 1 << '\n';
    for (Index j : g.neighbors(i)) out << i + 1 << ' ' << j + 1 << '\n';
  }
}

void write_graph_file(const std::filesystem::path& path, const GraphStructure& g) {
  auto out = open_out(path);
  write_graph(out, g);
}

// ---------------------------------------------------------------------------
// Matrix Market

SparseRowMatrix read_matrix_market(std::istream& in, const GraphStructure& g) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("matrix file: empty");
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    for (auto* s : {&object, &format, &field, &symmetry})
      for (char& c : *s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
        field != "real" || symmetry != "general")
      throw InputError("matrix file: expected '%%MatrixMarket matrix coordinate real general'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!is_blank(line) && trim(line)[0] != '%') break;
  }
  std::istringstream ss(line);
  std::string rs, cs, ns, extra;
  if (!(ss >> rs >> cs >> ns) || (ss >> extra))
    throw InputError("matrix file: size line must be 'rows cols entries'");
  const auto rows = parse_index(rs, "matrix file size line");
  const auto cols = parse_index(cs, "matrix file size line");
  const auto nnz = parse_index(ns, "matrix file size line");
  if (rows != g.n() || cols != g.n())
    throw InputError("matrix file: dimension " + rs + "x" + cs + " does not match graph n=" +
                     std::to_string(g.n()));

  SparseRowMatrix m(g);
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t read = 0;
  while (read < nnz && std::getline(in, line)) {
    ++lineno;
    if (is_blank(line) || trim(line)[0] == '%') continue;
    const std::string where = "matrix file line " + std::to_string(lineno);
    std::istringstream es(line);
    std::string is, js, vs;
    if (!(es >> is >> js >> vs) || (es >> extra)) throw InputError(where + ": expected 'i j value'");
    const auto i = parse_index(is, where);
    const auto j = parse_index(js, where);
    if (i < 1 || i > rows || j < 1 || j > cols) throw InputError(where + ": index out of range");
    const double v = parse_double(vs, where);
    if (!std::isfinite(v)) throw InputError(where + ": non-finite value");
    if (!seen.insert((i - 1) * rows + (j - 1)).second) throw InputError(where + ": duplicate entry");
    try {
      m.set(i - 1, j - 1, v);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    ++read;
  }
  if (read != nnz) throw InputError("matrix file: expected " + std::to_string(nnz) + " entries");
  while (std::getline(in, line)) {
    if (!is_blank(line) && trim(line)[0] != '%') throw InputError("matrix file: trailing data");
  }
  return m;
}

SparseRowMatrix read_matrix_market_file(const std::filesystem::path& path,
                                        const GraphStructure& g) {
  auto in = open_in(path);
  return read_matrix_market(in, g);
}

void write_matrix_market(std::ostream& out, const SparseRowMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.n() << ' ' << m.n() << ' ' << m.nonzero_slots() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < m.n(); ++i) {
    out << i + 1 << ' ' << i + 1 << ' ' << m.diag(i) << '\n';
    auto c = m.cols(i);
    auto v = m.row(i);
    for (std::size_t k = 0; k < c.size(); ++k) out << i + 1 << ' ' << c[k] + 1 << ' ' << v[k] << '\n';
  }
}

void write_matrix_market_file(const std::filesystem::path& path, const SparseRowMatrix& m) {
  auto out = open_out(path);
  write_matrix_market(out, m);
}

// ---------------------------------------------------------------------------
// Manifest

Manifest read_manifest(std::istream& in) {
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw InputError("manifest line " + std::to_string(lineno) + ": expected key=value");
    m[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return m;
}

Manifest read_manifest_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_manifest(in);
}

void write_manifest(std::ostream& out, const Manifest& m) {
  for (const auto& [k, v] : m) out << k << '=' << v << '\n';
}

void write_manifest_file(const std::filesystem::path& path, const Manifest& m) {
  auto out = open_out(path);
  write_manifest(out, m);
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory read_trajectory(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("trajectory file: empty");
  const std::string hdr = trim(line);
  if (hdr.rfind("h=", 0) != 0) throw InputError("trajectory file: first line must be 'h=<value>'");
  Trajectory t;
  t.h = parse_double(std::string_view(hdr).substr(2), "trajectory header");
  if (!(t.h > 0.0)) throw InputError("trajectory file: h must be > 0");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    const std::string where = "trajectory line " + std::to_string(lineno);
    std::vector<double> r;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) r.push_back(parse_double(tok, where));
    if (!rows.empty() && r.size() != rows.front().size())
      throw InputError(where + ": ragged row");
    rows.push_back(std::move(r));
  }
  if (rows.empty() || rows.front().size() < 2)
    throw InputError("trajectory file: need at least two states");
  const std::size_t n = rows.size(), steps = rows.front().size();
  t.states.assign(steps, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < steps; ++k) t.states[k][i] = rows[i][k];
  return t;
}

Trajectory read_trajectory_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_trajectory(in);
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "h=" << t.h << '\n';
  for (std::size_t i = 0; i < t.n(); ++i) {
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      if (k) out << ',';
      out << t.states[k][i];
    }
    out << '\n';
  }
}

void write_trajectory_file(const std::filesystem::path& path, const Trajectory& t) {
  auto out = open_out(path);
  write_trajectory(out, t);
}

}  // namespace nearlap
