#include "quadsketch/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "quadsketch/random.hpp"

namespace quadsketch {

namespace {

constexpr double kRelTol = 1e-12;
constexpr std::size_t kDenseFiedlerLimit = 160;
constexpr int kPowerIterations = 600;

bool qualifies(const CutCriterion& c, double numerator, double denominator) {
  if (denominator <= 0.0) return false;
  if (c.mode == CutMode::edge_expansion) return numerator < c.threshold * denominator;
  return numerator <= c.threshold * denominator * (1.0 + kRelTol);
}

CutQuery smaller_side(CutQuery s) {
  if (2 * s.count() > s.size()) return s.complement();
  return s;
}

SparseCutResult exhaustive_cut(const WeightedGraph& p, const CutCriterion& c) {
  const std::size_t n = p.num_vertices();
  std::vector<std::uint32_t> adj(n, 0);
  for (const Edge& e : p.edges()) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  const double total_volume = 2.0 * p.total_weight();
  std::uint32_t mask = 0;
  std::size_t size = 0;
  long long cut_count = 0;
  double cut_w = 0.0;
  double vol = 0.0;
  const std::uint32_t limit = 1U << (n - 1);
  for (std::uint32_t next = 1; next < limit; ++next) {
    std::uint32_t flipped = next ^ (next - 1);
    while (flipped) {
      const auto v = static_cast<Vertex>(std::countr_zero(flipped));
      flipped &= flipped - 1;
      const long long deg = static_cast<long long>(p.degree(v));
      const long long inside = std::popcount(adj[v] & mask);
      double w_inside = 0.0;
      if (c.mode == CutMode::conductance) {
        for (const Incidence& inc : p.neighbors(v)) {
          if ((mask >> inc.neighbor) & 1U) w_inside += inc.w;
        }
      }
      const double dv = p.weighted_degree(v);
      if ((mask >> v) & 1U) {
        mask &= ~(1U << v);
        --size;
        cut_count -= deg - 2 * inside;
        cut_w -= dv - 2.0 * w_inside;
        vol -= dv;
      } else {
        mask |= 1U << v;
        ++size;
        cut_count += deg - 2 * inside;
        cut_w += dv - 2.0 * w_inside;
        vol += dv;
      }
    }
    bool hit;
    if (c.mode == CutMode::edge_expansion) {
      const std::size_t k = std::min(size, n - size);
      hit = qualifies(c, static_cast<double>(cut_count), static_cast<double>(k));
    } else {
      hit = qualifies(c, cut_w, std::min(vol, total_volume - vol));
    }
    if (hit) return {smaller_side(CutQuery::from_mask(n, mask)), true};
  }
  return {std::nullopt, true};
}

// Second eigenvector of the unweighted Laplacian (edge mode) or of the
// normalized Laplacian mapped back through D^{-1/2} (conductance mode).
std::vector<double> fiedler_vector(const WeightedGraph& p, bool normalized) {
  const std::size_t n = p.num_vertices();
  std::vector<double> scale(n, 1.0);
  if (normalized) {
    for (Vertex u = 0; u < n; ++u) scale[u] = 1.0 / std::sqrt(p.weighted_degree(u));
  }
  auto weight = [&](const Incidence& inc) { return normalized ? inc.w : 1.0; };
  auto diag = [&](Vertex u) {
    return normalized ? 1.0 : static_cast<double>(p.degree(u));
  };

  std::vector<double> v(n);
  if (n <= kDenseFiedlerLimit) {
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Vertex u = 0; u < n; ++u) {
      m(u, u) = diag(u);
      for (const Incidence& inc : p.neighbors(u)) {
        m(u, inc.neighbor) -= weight(inc) * scale[u] * scale[inc.neighbor];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    for (Vertex u = 0; u < n; ++u) v[u] = es.eigenvectors()(u, 1);
  } else {
    // Power iteration on sigma*I - M with the known null vector projected out.
    std::vector<double> null(n);
    double null_norm = 0.0;
    for (Vertex u = 0; u < n; ++u) {
      null[u] = normalized ? 1.0 / scale[u] : 1.0;
      null_norm += null[u] * null[u];
    }
    null_norm = std::sqrt(null_norm);
    for (double& x : null) x /= null_norm;
    double sigma = 0.0;
    for (Vertex u = 0; u < n; ++u) sigma = std::max(sigma, 2.0 * diag(u));
    if (normalized) sigma = 2.0;

    Rng rng(0x9e37'79b9'7f4a'7c15ULL ^ n);
    for (double& x : v) x = rng.uniform() - 0.5;
    std::vector<double> next(n);
    for (int it = 0; it < kPowerIterations; ++it) {
      double dot = 0.0;
      for (Vertex u = 0; u < n; ++u) dot += v[u] * null[u];
      for (Vertex u = 0; u < n; ++u) v[u] -= dot * null[u];
      for (Vertex u = 0; u < n; ++u) {
        double acc = (sigma - diag(u)) * v[u];
        for (const Incidence& inc : p.neighbors(u)) {
          acc += weight(inc) * scale[u] * scale[inc.neighbor] * v[inc.neighbor];
        }
        next[u] = acc;
      }
      double norm = 0.0;
      for (double x : next) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (Vertex u = 0; u < n; ++u) v[u] = next[u] / norm;
    }
  }
  for (Vertex u = 0; u < n; ++u) v[u] *= scale[u];
  return v;
}

SparseCutResult sweep_cut(const WeightedGraph& p, const CutCriterion& c) {
  const std::size_t n = p.num_vertices();
  const std::vector<double> f = fiedler_vector(p, c.mode == CutMode::conductance);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return f[a] < f[b]; });

  const double total_volume = 2.0 * p.total_weight();
  std::vector<std::uint8_t> in(n, 0);
  long long cut_count = 0;
  double cut_w = 0.0;
  double vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  double best_num = 0.0;
  double best_den = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const Vertex v = order[k - 1];
    long long inside = 0;
    double w_inside = 0.0;
    for (const Incidence& inc : p.neighbors(v)) {
      if (in[inc.neighbor]) {
        ++inside;
        w_inside += inc.w;
      }
    }
    in[v] = 1;
    cut_count += static_cast<long long>(p.degree(v)) - 2 * inside;
    cut_w += p.weighted_degree(v) - 2.0 * w_inside;
    vol += p.weighted_degree(v);
    double num;
    double den;
    if (c.mode == CutMode::edge_expansion) {
      num = static_cast<double>(cut_count);
      den = static_cast<double>(std::min(k, n - k));
    } else {
      num = cut_w;
      den = std::min(vol, total_volume - vol);
    }
    if (den > 0.0 && num / den < best) {
      best = num / den;
      best_k = k;
      best_num = num;
      best_den = den;
    }
  }
  if (best_k == 0 || !qualifies(c, best_num, best_den)) return {std::nullopt, false};
  std::vector<Vertex> prefix(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_k));
  return {smaller_side(CutQuery::from_members(n, prefix)), false};
}

std::vector<Subgraph> connected_pieces(const Subgraph& parent) {
  std::vector<Subgraph> out;
  for (const auto& members : connected_components(parent.graph).groups()) {
    if (members.size() < 2) continue;
    out.push_back(compose(induced_subgraph(parent.graph, members), parent));
  }
  return out;
}

int cut_class_index(double w) {
  int i = static_cast<int>(std::floor(std::log2(5.0 / w))) + 1;
  const auto lower = [](int k) { return 5.0 * std::ldexp(1.0, -k); };
  while (w <= lower(i)) ++i;
  while (i > 1 && w > lower(i - 1)) --i;
  return i;
}

}  // namespace

SparseCutResult find_sparse_cut(const WeightedGraph& p, const CutCriterion& criterion) {
  if (p.num_vertices() < 2) return {std::nullopt, true};
  if (p.num_vertices() <= kExhaustiveCutLimit) return exhaustive_cut(p, criterion);
  return sweep_cut(p, criterion);
}

PartitionResult split_recursively(const WeightedGraph& g, const CutCriterion& criterion) {
  PartitionResult result;
  Subgraph whole;
  whole.graph = g;
  whole.to_parent.resize(g.num_vertices());
  std::iota(whole.to_parent.begin(), whole.to_parent.end(), Vertex{0});
  whole.edge_origin.resize(g.num_edges());
  std::iota(whole.edge_origin.begin(), whole.edge_origin.end(), std::size_t{0});

  std::deque<Subgraph> work;
  for (Subgraph& piece : connected_pieces(whole)) work.push_back(std::move(piece));
  while (!work.empty()) {
    Subgraph piece = std::move(work.front());
    work.pop_front();
    const SparseCutResult found = find_sparse_cut(piece.graph, criterion);
    if (!found.cut) {
      (found.certified ? result.certified_pieces : result.heuristic_pieces) += 1;
      result.components.push_back(std::move(piece));
      continue;
    }
    const CutQuery& side = *found.cut;
    for (std::size_t i = 0; i < piece.graph.num_edges(); ++i) {
      const Edge& e = piece.graph.edge(i);
      if (side.contains(e.u) != side.contains(e.v)) result.cross_edges.push_back(piece.edge_origin[i]);
    }
    for (const CutQuery& half : {side, side.complement()}) {
      const std::vector<Vertex> members = half.members();
      const Subgraph sub = compose(induced_subgraph(piece.graph, members), piece);
      for (Subgraph& next : connected_pieces(sub)) work.push_back(std::move(next));
    }
  }
  std::sort(result.components.begin(), result.components.end(), [](const Subgraph& a, const Subgraph& b) {
    return *std::min_element(a.to_parent.begin(), a.to_parent.end()) <
           *std::min_element(b.to_parent.begin(), b.to_parent.end());
  });
  std::sort(result.cross_edges.begin(), result.cross_edges.end());
  return result;
}

PartitionResult spectral_preprocessing(const WeightedGraph& g, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("conductance threshold must be positive");
  return split_recursively(g, {CutMode::conductance, h});
}

double q_bound_ratio(const PartitionResult& result, std::size_t m, double h) {
  if (m == 0) return 0.0;
  return static_cast<double>(result.cross_edges.size()) /
         (h * static_cast<double>(m) * std::log2(static_cast<double>(m) + 1.0));
}

std::vector<double> importance_sample(const WeightedGraph& g, double c, double epsilon,
                                      std::uint64_t seed) {
  if (!(c > 0.0)) throw std::invalid_argument("scale must be positive");
  Rng rng(derive_seed(seed, 0x1a4f'0002));
  const double eps2 = epsilon * epsilon;
  std::vector<double> out(g.num_edges(), 0.0);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const double w = g.edge(i).w / c;
    if (w > 5.0) continue;
    const double p = std::min(w / eps2, 1.0);
    if (p >= 1.0 || rng.uniform() < p) out[i] = w / p;
  }
  return out;
}

CutPreprocessing cut_preprocessing(const WeightedGraph& g, double c, double epsilon,
                                   std::uint64_t seed) {
  const double n = static_cast<double>(g.num_vertices());
  if (!(epsilon >= 1.0 / n && epsilon < 1.0)) {
    throw std::domain_error("epsilon must lie in [1/n, 1); store the graph exactly instead");
  }
  CutPreprocessing out;
  out.scale = c;
  out.resampled_weight = importance_sample(g, c, epsilon, seed);

  std::map<int, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const double wt = out.resampled_weight[i];
    if (g.edge(i).w / c > 5.0) {
      out.discarded.push_back(i);
    } else if (wt == 0.0) {
      out.unsampled.push_back(i);
    } else {
      buckets[cut_class_index(wt)].push_back(i);
    }
  }
  const CutCriterion criterion{CutMode::edge_expansion, 1.0 / epsilon};
  for (auto& [index, ids] : buckets) {
    CutWeightClass cls;
    cls.index = index;
    cls.gamma = 5.0 * std::ldexp(1.0, -index);
    std::vector<Edge> edges;
    edges.reserve(ids.size());
    for (std::size_t id : ids) {
      const Edge& e = g.edge(id);
      edges.push_back({e.u, e.v, out.resampled_weight[id]});
    }
    cls.graph = WeightedGraph(g.num_vertices(), edges);
    cls.edge_origin = std::move(ids);
    cls.parts = split_recursively(cls.graph, criterion);
    out.classes.push_back(std::move(cls));
  }
  return out;
}

namespace {

long long violation_potential(const WeightedGraph& g, const std::vector<std::uint8_t>& forward,
                              const std::vector<std::size_t>& out, std::size_t t) {
  long long delta = 0;
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    const Vertex tail = forward[i] ? e.u : e.v;
    const Vertex head = forward[i] ? e.v : e.u;
    if (out[tail] >= t && out[head] + 1 < t) {
      delta += static_cast<long long>(out[tail]) - static_cast<long long>(out[head]);
    }
  }
  return delta;
}

}  // namespace

DirectedGraph assign_direction(const WeightedGraph& g, std::size_t t, bool check_potential) {
  if (t < 2) throw std::invalid_argument("assign_direction needs t > 1");
  const std::size_t n = g.num_vertices();
  std::vector<std::uint8_t> forward(g.num_edges(), 1);  // true: u -> v with u < v
  std::vector<std::size_t> out(n, 0);
  for (const Edge& e : g.edges()) ++out[e.u];

  long long potential = check_potential ? violation_potential(g, forward, out, t) : 0;
  bool flipped = true;
  while (flipped) {
    flipped = false;
    for (Vertex u = 0; u < n; ++u) {
      if (out[u] < t) continue;
      for (const Incidence& inc : g.neighbors(u)) {
        const Edge& e = g.edge(inc.edge);
        const bool u_is_tail = forward[inc.edge] ? e.u == u : e.v == u;
        if (!u_is_tail || out[inc.neighbor] + 1 >= t) continue;
        forward[inc.edge] ^= 1;
        --out[u];
        ++out[inc.neighbor];
        flipped = true;
        if (check_potential) {
          const long long next = violation_potential(g, forward, out, t);
          if (potential - next < 2) throw std::logic_error("flip did not reduce the potential by 2");
          potential = next;
        }
        if (out[u] < t) break;
      }
    }
  }

  std::vector<Arc> arcs;
  arcs.reserve(g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    arcs.push_back(forward[i] ? Arc{e.u, e.v, e.w} : Arc{e.v, e.u, e.w});
  }
  return DirectedGraph(n, std::move(arcs));
}

bool direction_postcondition(const DirectedGraph& d, std::size_t t) {
  const std::vector<std::size_t> out = d.out_degrees();
  return std::all_of(d.arcs().begin(), d.arcs().end(), [&](const Arc& a) {
    return out[a.tail] < t || out[a.head] + 1 >= t;
  });
}

std::size_t DegreeClassPartition::depth_bound() const {
  if (min_s <= 1.0 || input_vertices < 2) return 1;
  const double base = 2.0 - 1.0 / min_s;
  return static_cast<std::size_t>(
             std::ceil(std::log(static_cast<double>(input_vertices)) / std::log(base) - 1e-12)) +
         1;
}

namespace {

std::size_t active_vertices(const WeightedGraph& g) {
  std::size_t k = 0;
  for (Vertex u = 0; u < g.num_vertices(); ++u) k += g.degree(u) > 0 ? 1 : 0;
  return k;
}

std::vector<Arc> forward_arcs(const WeightedGraph& g) {
  std::vector<Arc> arcs;
  for (const Edge& e : g.edges()) arcs.push_back({e.u, e.v, e.w});
  return arcs;
}

}  // namespace

DegreeClassPartition degree_class_partition(const WeightedGraph& g, double epsilon,
                                            const DegreeClassOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  const std::size_t n = g.num_vertices();
  DegreeClassPartition out;
  out.beta = options.c_beta * std::pow(epsilon, -1.6);
  out.input_vertices = active_vertices(g);

  WeightedGraph remaining = g;
  for (std::size_t level = 0; remaining.num_edges() > 0; ++level) {
    const std::size_t active = active_vertices(remaining);
    if (active < 3) {
      out.classes.push_back({DegreeClassKind::verbatim, 0, 0, level, DirectedGraph(n, forward_arcs(remaining))});
      out.recursion_depth = level + 1;
      break;
    }
    SparsifierConfig cfg;
    cfg.epsilon = epsilon;
    cfg.kind = SparsifierKind::spectral;
    cfg.seed = derive_seed(options.seed, 0xdc'0000 + level);
    cfg.oversampling = options.oversampling;
    const WeightedGraph sparse = sparsify(remaining, cfg);
    out.recursion_depth = level + 1;
    if (sparse.num_edges() == 0) break;

    const double eta = std::max(1.0, static_cast<double>(sparse.num_edges()) * epsilon * epsilon /
                                         static_cast<double>(active_vertices(sparse)));
    const double s = eta / (epsilon * epsilon);
    out.min_s = level == 0 ? s : std::min(out.min_s, s);
    const auto t = static_cast<std::size_t>(std::ceil(2.0 * s));
    const DirectedGraph directed = assign_direction(sparse, t, options.check_potential);

    std::map<int, std::vector<Arc>> by_weight;
    for (const Arc& a : directed.arcs()) {
      by_weight[static_cast<int>(std::floor(std::log2(a.w)))].push_back(a);
    }
    std::vector<Edge> leftover;
    for (auto& [j, arcs] : by_weight) {
      std::vector<std::size_t> outdeg(n, 0);
      for (const Arc& a : arcs) ++outdeg[a.tail];
      std::vector<Arc> low;
      std::map<int, std::vector<Arc>> bands;
      for (const Arc& a : arcs) {
        const auto d = static_cast<double>(outdeg[a.tail]);
        if (d < out.beta) {
          low.push_back(a);
          continue;
        }
        int band = static_cast<int>(std::floor(std::log2(d / out.beta)));
        while (std::ldexp(out.beta, band + 1) <= d) ++band;
        while (band > 0 && std::ldexp(out.beta, band) > d) --band;
        if (std::ldexp(out.beta, band) < static_cast<double>(t)) {
          bands[band].push_back(a);
        } else {
          leftover.push_back({a.tail, a.head, a.w});
        }
      }
      if (!low.empty()) {
        out.classes.push_back({DegreeClassKind::low, j, 0, level, DirectedGraph(n, std::move(low))});
      }
      for (auto& [band, members] : bands) {
        out.classes.push_back({DegreeClassKind::indexed, j, band, level, DirectedGraph(n, std::move(members))});
      }
    }
    if (leftover.size() == sparse.num_edges()) {
      out.classes.push_back({DegreeClassKind::verbatim, 0, 0, level, DirectedGraph(n, forward_arcs(sparse))});
      break;
    }
    remaining = WeightedGraph(n, leftover);
  }
  return out;
}

}  // namespace quadsketch
