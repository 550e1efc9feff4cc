#include "quadsketch/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace quadsketch {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError(lineno, "missing header \"n m\"");

  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || n < 0 || m < 0 || (header >> extra)) {
      throw ParseError(lineno, "expected header \"n m\" with non-negative integers");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_content_line(in, line, lineno)) {
      throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    }
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    double w = 0.0;
    std::string extra;
    if (!(row >> u >> v >> w) || (row >> extra)) throw ParseError(lineno, "expected \"u v w\"");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex id out of range");
    if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError(lineno, "edge weight must be positive");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
  }
  if (next_content_line(in, line, lineno)) throw ParseError(lineno, "trailing content after edge list");
  return WeightedGraph(static_cast<std::size_t>(n), edges);
}

WeightedGraph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  char buf[64];
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.w);
    out << e.u << ' ' << e.v << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
}

void write_edge_list_file(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file " + path.string());
  write_edge_list(out, g);
}

}  // namespace quadsketch
