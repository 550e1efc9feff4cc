#include "quadsketch/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

namespace quadsketch {

namespace {

std::uint64_t pair_key(Vertex u, Vertex v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void check_exhaustive_size(const WeightedGraph& g) {
  if (g.num_vertices() > kMaxExhaustiveVertices) {
    throw std::invalid_argument("instance too large for exhaustive oracle (n = " +
                                std::to_string(g.num_vertices()) + " > 24)");
  }
}

}  // namespace

WeightedGraph::WeightedGraph(std::size_t n) : WeightedGraph(n, std::span<const Edge>{}) {}

WeightedGraph::WeightedGraph(std::size_t n, std::span<const Edge> edges) : n_(n) {
  if (n > std::numeric_limits<Vertex>::max()) {
    throw std::invalid_argument("vertex count exceeds 32-bit id range");
  }
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(edges.size() * 2);
  edges_.reserve(edges.size());
  for (const Edge& raw : edges) {
    if (raw.u >= n || raw.v >= n) {
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(raw.u) +
                                  ", " + std::to_string(raw.v) + ") with n = " +
                                  std::to_string(n));
    }
    if (raw.u == raw.v) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(raw.u));
    }
    if (!(raw.w > 0.0) || !std::isfinite(raw.w)) {
      throw std::invalid_argument("edge weight must be positive and finite");
    }
    Edge e{std::min(raw.u, raw.v), std::max(raw.u, raw.v), raw.w};
    auto [it, inserted] = index.try_emplace(pair_key(e.u, e.v), edges_.size());
    if (inserted) {
      edges_.push_back(e);
    } else {
      edges_[it->second].w += e.w;
    }
  }

  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  weighted_degree_.assign(n_, 0.0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adjacency_[cursor[e.u]++] = Incidence{e.v, e.w, i};
    adjacency_[cursor[e.v]++] = Incidence{e.u, e.w, i};
    weighted_degree_[e.u] += e.w;
    weighted_degree_[e.v] += e.w;
  }

  if (!edges_.empty()) {
    min_weight_ = std::numeric_limits<double>::infinity();
    for (const Edge& e : edges_) {
      total_weight_ += e.w;
      min_weight_ = std::min(min_weight_, e.w);
      max_weight_ = std::max(max_weight_, e.w);
    }
  }
}

std::span<const Incidence> WeightedGraph::neighbors(Vertex u) const {
  return std::span<const Incidence>(adjacency_).subspan(offsets_[u], offsets_[u + 1] - offsets_[u]);
}

std::size_t WeightedGraph::degree(Vertex u) const { return offsets_[u + 1] - offsets_[u]; }

double WeightedGraph::weighted_degree(Vertex u) const { return weighted_degree_[u]; }

DirectedGraph::DirectedGraph(std::size_t n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
  std::unordered_map<std::uint64_t, std::size_t> seen;
  seen.reserve(arcs_.size() * 2);
  for (const Arc& a : arcs_) {
    if (a.tail >= n || a.head >= n) throw std::invalid_argument("arc endpoint out of range");
    if (a.tail == a.head) throw std::invalid_argument("self-loop arc");
    if (!(a.w > 0.0)) throw std::invalid_argument("arc weight must be positive");
    const auto key = pair_key(std::min(a.tail, a.head), std::max(a.tail, a.head));
    if (!seen.emplace(key, 0).second) {
      throw std::invalid_argument("duplicate arc for an unordered vertex pair");
    }
  }
}

std::vector<std::size_t> DirectedGraph::out_degrees() const {
  std::vector<std::size_t> d(n_, 0);
  for (const Arc& a : arcs_) ++d[a.tail];
  return d;
}

std::vector<std::size_t> DirectedGraph::in_degrees() const {
  std::vector<std::size_t> d(n_, 0);
  for (const Arc& a : arcs_) ++d[a.head];
  return d;
}

std::vector<double> DirectedGraph::weighted_out_degrees() const {
  std::vector<double> d(n_, 0.0);
  for (const Arc& a : arcs_) d[a.tail] += a.w;
  return d;
}

std::vector<double> DirectedGraph::weighted_in_degrees() const {
  std::vector<double> d(n_, 0.0);
  for (const Arc& a : arcs_) d[a.head] += a.w;
  return d;
}

WeightedGraph DirectedGraph::undirected() const {
  std::vector<Edge> edges;
  edges.reserve(arcs_.size());
  for (const Arc& a : arcs_) edges.push_back({a.tail, a.head, a.w});
  return WeightedGraph(n_, edges);
}

CutQuery CutQuery::from_members(std::size_t n, std::span<const Vertex> members) {
  CutQuery q(n);
  for (Vertex u : members) {
    if (u >= n) throw std::invalid_argument("cut member " + std::to_string(u) + " out of range");
    q.bits_[u] = 1;
  }
  return q;
}

CutQuery CutQuery::from_mask(std::size_t n, std::uint64_t mask) {
  CutQuery q(n);
  for (std::size_t i = 0; i < n && i < 64; ++i) q.bits_[i] = (mask >> i) & 1U;
  return q;
}

std::size_t CutQuery::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<Vertex> CutQuery::members() const {
  std::vector<Vertex> out;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<Vertex>(i));
  }
  return out;
}

CutQuery CutQuery::complement() const {
  CutQuery q(size());
  for (std::size_t i = 0; i < bits_.size(); ++i) q.bits_[i] = bits_[i] ? 0 : 1;
  return q;
}

std::vector<double> CutQuery::indicator() const {
  std::vector<double> x(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) x[i] = bits_[i] ? 1.0 : 0.0;
  return x;
}

Subgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices) {
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);

  Subgraph sub;
  sub.to_parent.assign(vertices.begin(), vertices.end());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    if (local[e.u] != kAbsent && local[e.v] != kAbsent) {
      edges.push_back({local[e.u], local[e.v], e.w});
      sub.edge_origin.push_back(i);
    }
  }
  sub.graph = WeightedGraph(vertices.size(), edges);
  return sub;
}

Subgraph edge_subgraph(const WeightedGraph& g, std::span<const std::size_t> edge_ids) {
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<std::uint8_t> touched(g.num_vertices(), 0);
  for (std::size_t id : edge_ids) {
    touched[g.edge(id).u] = 1;
    touched[g.edge(id).v] = 1;
  }
  Subgraph sub;
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  for (std::size_t u = 0; u < g.num_vertices(); ++u) {
    if (touched[u]) {
      local[u] = static_cast<Vertex>(sub.to_parent.size());
      sub.to_parent.push_back(static_cast<Vertex>(u));
    }
  }
  std::vector<Edge> edges;
  edges.reserve(edge_ids.size());
  for (std::size_t id : edge_ids) {
    const Edge& e = g.edge(id);
    edges.push_back({local[e.u], local[e.v], e.w});
    sub.edge_origin.push_back(id);
  }
  sub.graph = WeightedGraph(sub.to_parent.size(), edges);
  return sub;
}

Subgraph compose(Subgraph inner, const Subgraph& outer) {
  for (Vertex& v : inner.to_parent) v = outer.to_parent[v];
  for (std::size_t& e : inner.edge_origin) e = outer.edge_origin[e];
  return inner;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

double quadratic_form(const WeightedGraph& g, std::span<const double> x) {
  if (x.size() != g.num_vertices()) {
    throw DimensionError("query vector has length " + std::to_string(x.size()) +
                         ", graph has " + std::to_string(g.num_vertices()) + " vertices");
  }
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    const double d = x[e.u] - x[e.v];
    sum += e.w * d * d;
  }
  return sum;
}

double cut_weight(const WeightedGraph& g, const CutQuery& s) {
  if (s.size() != g.num_vertices()) throw DimensionError("cut query length mismatch");
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.u) != s.contains(e.v)) sum += e.w;
  }
  return sum;
}

std::size_t cut_size(const WeightedGraph& g, const CutQuery& s) {
  if (s.size() != g.num_vertices()) throw DimensionError("cut query length mismatch");
  std::size_t count = 0;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.u) != s.contains(e.v)) ++count;
  }
  return count;
}

Degrees degrees(const WeightedGraph& g) {
  Degrees d;
  d.weighted.resize(g.num_vertices());
  d.unweighted.resize(g.num_vertices());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    d.weighted[u] = g.weighted_degree(u);
    d.unweighted[u] = g.degree(u);
  }
  return d;
}

double volume(const WeightedGraph& g, const CutQuery& s) {
  if (s.size() != g.num_vertices()) throw DimensionError("cut query length mismatch");
  double vol = 0.0;
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    if (s.contains(u)) vol += g.weighted_degree(u);
  }
  return vol;
}

double conductance(const WeightedGraph& g, const CutQuery& s) {
  const double vol_s = volume(g, s);
  const double vol_rest = 2.0 * g.total_weight() - vol_s;
  const double denom = std::min(vol_s, vol_rest);
  if (!(denom > 0.0)) throw std::domain_error("conductance undefined: a side has zero volume");
  return cut_weight(g, s) / denom;
}

double cheeger_exact(const WeightedGraph& g) {
  check_exhaustive_size(g);
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("Cheeger constant needs at least two vertices");
  if (!is_connected(g)) throw std::invalid_argument("Cheeger constant requires a connected graph");

  // Vertex n-1 stays outside S; increments of the mask flip trailing bits.
  const double total_volume = 2.0 * g.total_weight();
  std::vector<std::uint8_t> in(n, 0);
  double cut = 0.0;
  double vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const std::uint64_t flipped = mask ^ (mask - 1);
    for (std::size_t v = 0; v < n - 1; ++v) {
      if (!((flipped >> v) & 1U)) continue;
      double to_s = 0.0;
      for (const Incidence& inc : g.neighbors(static_cast<Vertex>(v))) {
        if (in[inc.neighbor]) to_s += inc.w;
      }
      const double deg = g.weighted_degree(static_cast<Vertex>(v));
      if (in[v]) {
        in[v] = 0;
        cut -= deg - 2.0 * to_s;
        vol -= deg;
      } else {
        cut += deg - 2.0 * to_s;
        vol += deg;
        in[v] = 1;
      }
    }
    const double denom = std::min(vol, total_volume - vol);
    best = std::min(best, cut / denom);
  }
  return best;
}

double expansion_exact(const WeightedGraph& g) {
  check_exhaustive_size(g);
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("expansion needs at least two vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : g.edges()) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  std::uint32_t set = 0;
  long cut = 0;
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    const std::uint64_t flipped = mask ^ (mask - 1);
    for (std::size_t v = 0; v < n - 1; ++v) {
      if (!((flipped >> v) & 1U)) continue;
      const std::uint32_t bit = 1U << v;
      const long deg = std::popcount(adj[v]);
      if (set & bit) {
        set &= ~bit;
        cut -= deg - 2L * std::popcount(adj[v] & set);
      } else {
        cut += deg - 2L * std::popcount(adj[v] & set);
        set |= bit;
      }
    }
    const long size = std::popcount(set);
    const long smaller = std::min<long>(size, static_cast<long>(n) - size);
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(smaller));
  }
  return best;
}

std::vector<std::vector<Vertex>> Components::groups() const {
  std::vector<std::vector<Vertex>> out(count);
  for (std::size_t u = 0; u < label.size(); ++u) out[label[u]].push_back(static_cast<Vertex>(u));
  return out;
}

Components connected_components(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  Components c;
  c.label.assign(n, std::numeric_limits<std::size_t>::max());
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (c.label[s] != std::numeric_limits<std::size_t>::max()) continue;
    c.label[s] = c.count;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g.neighbors(u)) {
        if (c.label[inc.neighbor] == std::numeric_limits<std::size_t>::max()) {
          c.label[inc.neighbor] = c.count;
          stack.push_back(inc.neighbor);
        }
      }
    }
    ++c.count;
  }
  return c;
}

bool is_connected(const WeightedGraph& g) {
  return g.num_vertices() <= 1 || connected_components(g).count == 1;
}

}  // namespace quadsketch
