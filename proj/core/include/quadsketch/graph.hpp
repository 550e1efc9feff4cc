#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace quadsketch {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  Vertex neighbor = 0;
  double w = 0.0;
  std::size_t edge = 0;
};

/// Undirected, positively weighted simple graph on vertices [0, n).
///
/// Edges are stored with u < v. Parallel edges passed to the constructor are
/// merged by summing their weights; the merged edge keeps the position of its
/// first occurrence, so a simple input keeps its edge order and indices.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n);
  WeightedGraph(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  std::span<const Incidence> neighbors(Vertex u) const;
  std::size_t degree(Vertex u) const;
  double weighted_degree(Vertex u) const;

  double total_weight() const noexcept { return total_weight_; }
  double min_weight() const noexcept { return min_weight_; }
  double max_weight() const noexcept { return max_weight_; }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<double> weighted_degree_;
  double total_weight_ = 0.0;
  double min_weight_ = 0.0;
  double max_weight_ = 0.0;
};

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  double w = 0.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Orientation of an undirected graph: at most one arc per unordered pair.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(std::size_t n, std::vector<Arc> arcs);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_arcs() const noexcept { return arcs_.size(); }
  std::span<const Arc> arcs() const noexcept { return arcs_; }

  std::vector<std::size_t> out_degrees() const;
  std::vector<std::size_t> in_degrees() const;
  std::vector<double> weighted_out_degrees() const;
  std::vector<double> weighted_in_degrees() const;

  WeightedGraph undirected() const;

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Arc> arcs_;
};

/// Vertex subset S of [0, n) used as a cut query.
class CutQuery {
 public:
  CutQuery() = default;
  explicit CutQuery(std::size_t n) : bits_(n, 0) {}
  static CutQuery from_members(std::size_t n, std::span<const Vertex> members);
  static CutQuery from_mask(std::size_t n, std::uint64_t mask);

  std::size_t size() const noexcept { return bits_.size(); }
  bool contains(Vertex u) const { return bits_[u] != 0; }
  void set(Vertex u, bool in = true) { bits_.at(u) = in ? 1 : 0; }

  std::size_t count() const;
  bool empty_set() const { return count() == 0; }
  bool full_set() const { return count() == size(); }
  std::vector<Vertex> members() const;
  CutQuery complement() const;
  std::vector<double> indicator() const;

  friend bool operator==(const CutQuery&, const CutQuery&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A piece of a parent graph together with the maps back into it.
struct Subgraph {
  WeightedGraph graph;
  std::vector<Vertex> to_parent;         // local vertex -> parent vertex
  std::vector<std::size_t> edge_origin;  // local edge -> parent edge index
};

/// Subgraph induced by `vertices` (local ids follow the order given).
Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices);

/// Subgraph spanned by the listed parent edges; its vertices are the touched
/// endpoints in increasing parent-id order.
Subgraph edge_subgraph(const WeightedGraph& g, std::span<const std::size_t> edge_ids);

/// Re-expresses `inner` (a subgraph of outer.graph) relative to outer's parent.
Subgraph compose(Subgraph inner, const Subgraph& outer);

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const noexcept { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint32_t> rank_;
  std::size_t components_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// sum over edges of w(u,v) * (x_u - x_v)^2.
double quadratic_form(const WeightedGraph& g, std::span<const double> x);

/// Total weight of edges with exactly one endpoint in S.
double cut_weight(const WeightedGraph& g, const CutQuery& s);

/// Number of edges with exactly one endpoint in S.
std::size_t cut_size(const WeightedGraph& g, const CutQuery& s);

struct Degrees {
  std::vector<double> weighted;
  std::vector<std::size_t> unweighted;
};
Degrees degrees(const WeightedGraph& g);

double volume(const WeightedGraph& g, const CutQuery& s);

/// w(S, S-bar) / min(vol S, vol S-bar). Throws when either volume is zero.
double conductance(const WeightedGraph& g, const CutQuery& s);

inline constexpr std::size_t kMaxExhaustiveVertices = 24;

/// Cheeger constant by enumerating every nontrivial split (n <= 24).
double cheeger_exact(const WeightedGraph& g);

/// min over 1 <= |S| <= n/2 of |boundary(S)| / |S| (unweighted, n <= 24).
double expansion_exact(const WeightedGraph& g);

struct Components {
  std::vector<std::size_t> label;
  std::size_t count = 0;

  std::vector<std::vector<Vertex>> groups() const;
};
Components connected_components(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

}  // namespace quadsketch
