#include "quadsketch/cut_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "quadsketch/numeric.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/parallel.hpp"
#include "quadsketch/partition.hpp"
#include "quadsketch/random.hpp"
#include "quadsketch/sparsify.hpp"

namespace quadsketch {

namespace {

std::size_t samples_for(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return static_cast<std::size_t>(std::ceil(1.0 / epsilon - 1e-9));
}

bool trivial_query(const CutQuery& s) {
  const std::size_t k = s.count();
  return k == 0 || k == s.size();
}

void check_query(const CutQuery& s, std::size_t n) {
  if (s.size() != n) throw DimensionError("cut query length does not match the vertex count");
}

}  // namespace

// ---------------------------------------------------------------------------
// S1Sketch

S1Sketch::S1Sketch(const WeightedGraph& p, double epsilon,
                   const std::vector<std::vector<std::size_t>>& counts)
    : epsilon_(epsilon), samples_per_vertex_(samples_for(epsilon)) {
  const std::size_t n = p.num_vertices();
  if (counts.size() != n) throw std::invalid_argument("one count vector per vertex required");
  weighted_degree_.resize(n);
  degree_.resize(n);
  offsets_.assign(1, 0);
  for (Vertex u = 0; u < n; ++u) {
    weighted_degree_[u] = p.weighted_degree(u);
    degree_[u] = static_cast<std::uint32_t>(p.degree(u));
    const auto inc = p.neighbors(u);
    if (counts[u].size() != inc.size()) throw std::invalid_argument("count vector does not match degree");
    const std::size_t total = std::accumulate(counts[u].begin(), counts[u].end(), std::size_t{0});
    if (!inc.empty() && total != samples_per_vertex_) {
      throw std::invalid_argument("sample counts must sum to ceil(1/epsilon)");
    }
    for (std::size_t k = 0; k < inc.size(); ++k) {
      if (counts[u][k] > 0) {
        samples_.push_back({inc[k].neighbor, inc[k].w, static_cast<std::uint32_t>(counts[u][k])});
      }
    }
    offsets_.push_back(samples_.size());
  }
}

S1Sketch S1Sketch::build(const WeightedGraph& p, double epsilon, std::uint64_t seed) {
  const std::size_t s = samples_for(epsilon);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> counts(p.num_vertices());
  for (Vertex u = 0; u < p.num_vertices(); ++u) {
    const std::size_t d = p.degree(u);
    counts[u].assign(d, 0);
    if (d == 0) continue;
    for (std::size_t k = 0; k < s; ++k) ++counts[u][rng.below(d)];
  }
  return S1Sketch(p, epsilon, counts);
}

std::span<const S1Sketch::Sample> S1Sketch::samples(Vertex u) const {
  return std::span<const Sample>(samples_).subspan(offsets_.at(u), offsets_.at(u + 1) - offsets_[u]);
}

double S1Sketch::estimate(const CutQuery& s) const {
  check_query(s, num_vertices());
  const double inv_s = 1.0 / static_cast<double>(samples_per_vertex_);
  std::vector<double> terms;
  for (Vertex u = 0; u < num_vertices(); ++u) {
    if (!s.contains(u)) continue;
    double inside = 0.0;
    for (const Sample& smp : samples(u)) {
      if (s.contains(smp.neighbor)) inside += static_cast<double>(smp.count) * smp.w;
    }
    terms.push_back(weighted_degree_[u] - static_cast<double>(degree_[u]) * inv_s * inside);
  }
  return pairwise_sum(terms);
}

std::size_t S1Sketch::words() const { return 2 * num_vertices() + samples_.size(); }

void S1Sketch::serialize(ByteWriter& out) const {
  out.f64(epsilon_);
  out.varint(num_vertices());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    out.f64(weighted_degree_[u]);
    out.varint(degree_[u]);
    const auto smp = samples(u);
    out.varint(smp.size());
    for (const Sample& x : smp) {
      out.varint(x.neighbor);
      out.f64(x.w);
      out.varint(x.count);
    }
  }
}

S1Sketch S1Sketch::deserialize(ByteReader& in) {
  S1Sketch sk;
  sk.epsilon_ = in.f64();
  sk.samples_per_vertex_ = samples_for(sk.epsilon_);
  const std::size_t n = in.varint();
  sk.weighted_degree_.resize(n);
  sk.degree_.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    sk.weighted_degree_[u] = in.f64();
    sk.degree_[u] = static_cast<std::uint32_t>(in.varint());
    const std::size_t k = in.varint();
    for (std::size_t i = 0; i < k; ++i) {
      Sample x;
      x.neighbor = static_cast<Vertex>(in.varint());
      if (x.neighbor >= n) throw FormatError("sample neighbor out of range");
      x.w = in.f64();
      x.count = static_cast<std::uint32_t>(in.varint());
      sk.samples_.push_back(x);
    }
    sk.offsets_.push_back(sk.samples_.size());
  }
  return sk;
}

// ---------------------------------------------------------------------------
// CutSketchPoly

CutSketchPoly CutSketchPoly::build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                   const CutSketchOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  CutSketchPoly sk;
  sk.n_ = g.num_vertices();
  sk.epsilon_ = epsilon;
  if (g.num_edges() == 0 || epsilon < 1.0 / static_cast<double>(sk.n_)) {
    sk.verbatim_ = true;
    sk.sparsifier_ = g;
    return sk;
  }

  SparsifierConfig cfg;
  cfg.epsilon = options.sparsifier_epsilon;
  cfg.kind = SparsifierKind::cut;
  cfg.seed = derive_seed(seed, 1);
  cfg.oversampling = options.oversampling;
  sk.sparsifier_ = sparsify(g, cfg);
  const WeightedGraph& h = sk.sparsifier_;

  // Only rungs some query can select: c <= cut_H(S) / 1.96 with cut_H(S) in [lambda(H), total(H)].
  const double w0 = g.min_weight();
  double lambda = h.num_edges() > 0 ? h.min_weight() : w0;
  if (h.num_vertices() <= 256 && is_connected(h)) lambda = oracle::min_cut_exact(h).value;
  const double base2 = kLadderBase * kLadderBase;
  auto rung = [&](double value) {
    const double r = std::floor(std::log(value / base2 / w0) / std::log(kLadderBase));
    return std::max(0.0, r);
  };
  const auto lo = static_cast<std::size_t>(rung(lambda));
  const auto hi = std::max(lo, static_cast<std::size_t>(rung(std::max(h.total_weight(), w0))));

  sk.scales_.resize(hi - lo + 1);
  parallel_for(sk.scales_.size(), [&](std::size_t idx) {
    const std::size_t i = lo + idx;
    const double c = w0 * std::pow(kLadderBase, static_cast<double>(i));
    const std::uint64_t scale_seed = derive_seed(seed, 2, i);
    const CutPreprocessing pre = cut_preprocessing(g, c, epsilon, scale_seed);
    Scale& scale = sk.scales_[idx];
    scale.c = c;
    for (const CutWeightClass& cls : pre.classes) {
      WeightClass out;
      out.index = cls.index;
      for (std::size_t e : cls.parts.cross_edges) out.cross.push_back(cls.graph.edge(e));
      for (std::size_t k = 0; k < cls.parts.components.size(); ++k) {
        const Subgraph& piece = cls.parts.components[k];
        const std::uint64_t s = derive_seed(scale_seed, static_cast<std::uint64_t>(cls.index), k);
        out.components.push_back({piece.to_parent, S1Sketch::build(piece.graph, epsilon, s)});
      }
      scale.classes.push_back(std::move(out));
    }
  });
  return sk;
}

QueryResult CutSketchPoly::query(const CutQuery& s) const {
  check_query(s, n_);
  QueryResult r;
  if (trivial_query(s)) return r;
  if (verbatim_) {
    r.value = cut_weight(sparsifier_, s);
    r.bytes_touched = 16 * sparsifier_.num_edges();
    return r;
  }
  const double approx = cut_weight(sparsifier_, s);
  r.bytes_touched = 16 * sparsifier_.num_edges();
  if (approx == 0.0 || scales_.empty()) return r;

  const double target = approx / (kLadderBase * kLadderBase);
  std::size_t pick = 0;
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    if (scales_[i].c <= target) pick = i;
  }
  const Scale& scale = scales_[pick];
  r.scale = scale.c;

  std::vector<double> totals;
  for (const WeightClass& cls : scale.classes) {
    std::vector<double> parts;
    for (const Edge& e : cls.cross) {
      if (s.contains(e.u) != s.contains(e.v)) parts.push_back(e.w);
    }
    r.bytes_touched += 16 * cls.cross.size();
    for (const Component& comp : cls.components) {
      const std::size_t k = comp.vertices.size();
      CutQuery local(k);
      std::size_t inside = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (s.contains(comp.vertices[i])) {
          local.set(static_cast<Vertex>(i));
          ++inside;
        }
      }
      if (inside == 0 || inside == k) continue;
      if (2 * inside > k) local = local.complement();
      parts.push_back(comp.sketch.estimate(local));
      r.bytes_touched += 8 * comp.sketch.words();
    }
    totals.push_back(scale.c * pairwise_sum(parts));
  }
  r.contributions = totals;
  r.value = pairwise_sum(totals);
  return r;
}

std::vector<double> CutSketchPoly::ladder() const {
  std::vector<double> out;
  for (const Scale& s : scales_) out.push_back(s.c);
  return out;
}

std::size_t CutSketchPoly::words() const {
  std::size_t w = sparsifier_.num_edges();
  for (const Scale& s : scales_) {
    for (const WeightClass& cls : s.classes) {
      w += cls.cross.size();
      for (const Component& comp : cls.components) w += comp.sketch.words();
    }
  }
  return w;
}

void CutSketchPoly::serialize(ByteWriter& out) const {
  out.u8(verbatim_ ? 1 : 0);
  out.varint(n_);
  out.f64(epsilon_);
  write_graph(out, sparsifier_);
  out.varint(scales_.size());
  for (const Scale& s : scales_) {
    const auto token = out.begin_section();
    out.f64(s.c);
    out.varint(s.classes.size());
    for (const WeightClass& cls : s.classes) {
      out.varint(static_cast<std::uint64_t>(cls.index));
      write_edges(out, cls.cross);
      out.varint(cls.components.size());
      for (const Component& comp : cls.components) {
        out.varint(comp.vertices.size());
        for (Vertex v : comp.vertices) out.varint(v);
        comp.sketch.serialize(out);
      }
    }
    out.end_section(token);
  }
}

CutSketchPoly CutSketchPoly::deserialize(ByteReader& in) {
  CutSketchPoly sk;
  sk.verbatim_ = in.u8() != 0;
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  sk.sparsifier_ = read_graph(in);
  if (sk.sparsifier_.num_vertices() != sk.n_) throw FormatError("sparsifier vertex count mismatch");
  const std::size_t scales = in.varint();
  for (std::size_t i = 0; i < scales; ++i) {
    ByteReader sec = in.section();
    Scale s;
    s.c = sec.f64();
    const std::size_t classes = sec.varint();
    for (std::size_t j = 0; j < classes; ++j) {
      WeightClass cls;
      cls.index = static_cast<int>(sec.varint());
      cls.cross = read_edges(sec);
      const std::size_t comps = sec.varint();
      for (std::size_t k = 0; k < comps; ++k) {
        Component comp;
        comp.vertices.resize(sec.varint());
        for (Vertex& v : comp.vertices) {
          v = static_cast<Vertex>(sec.varint());
          if (v >= sk.n_) throw FormatError("component vertex out of range");
        }
        comp.sketch = S1Sketch::deserialize(sec);
        if (comp.sketch.num_vertices() != comp.vertices.size()) {
          throw FormatError("component sketch size mismatch");
        }
        cls.components.push_back(std::move(comp));
      }
      s.classes.push_back(std::move(cls));
    }
    sec.expect_end();
    sk.scales_.push_back(std::move(s));
  }
  return sk;
}

std::vector<std::uint8_t> CutSketchPoly::to_bytes() const {
  ByteWriter w;
  serialize(w);
  return wrap_envelope(SketchKind::cut_poly, w.buffer());
}

CutSketchPoly CutSketchPoly::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::cut_poly);
  CutSketchPoly sk = deserialize(in);
  in.expect_end();
  return sk;
}

// ---------------------------------------------------------------------------
// CutSketchGeneral

std::vector<std::size_t> mst_max(const WeightedGraph& g) {
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.edge(a).w > g.edge(b).w; });
  UnionFind uf(g.num_vertices());
  std::vector<std::size_t> tree;
  for (std::size_t id : order) {
    const Edge& e = g.edge(id);
    if (uf.unite(e.u, e.v)) tree.push_back(id);
  }
  return tree;
}

namespace {

struct Contraction {
  std::vector<Vertex> class_rep;      // vertex -> smallest vertex of its class
  std::vector<Vertex> component_rep;  // vertex -> smallest vertex of its G_j component
};

// Classes: tree edges of weight >= heavy. Components: tree edges of weight >= light.
Contraction contraction_for(std::span<const Edge> tree, std::size_t n, double heavy, double light) {
  UnionFind classes(n);
  UnionFind comps(n);
  for (const Edge& e : tree) {
    if (e.w >= heavy) classes.unite(e.u, e.v);
    if (e.w >= light) comps.unite(e.u, e.v);
  }
  Contraction c;
  c.class_rep.assign(n, 0);
  c.component_rep.assign(n, 0);
  std::vector<Vertex> min_class(n, static_cast<Vertex>(n));
  std::vector<Vertex> min_comp(n, static_cast<Vertex>(n));
  for (Vertex v = 0; v < n; ++v) {
    min_class[classes.find(v)] = std::min(min_class[classes.find(v)], v);
    min_comp[comps.find(v)] = std::min(min_comp[comps.find(v)], v);
  }
  for (Vertex v = 0; v < n; ++v) {
    c.class_rep[v] = min_class[classes.find(v)];
    c.component_rep[v] = min_comp[comps.find(v)];
  }
  return c;
}

double cube(double x) { return x * x * x; }

}  // namespace

CutSketchGeneral CutSketchGeneral::build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                         const CutSketchOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  CutSketchGeneral sk;
  sk.n_ = g.num_vertices();
  sk.epsilon_ = epsilon;
  const double n = static_cast<double>(sk.n_);
  if (epsilon < 1.0 / n) {
    sk.verbatim_ = true;
    sk.exact_ = g;
    return sk;
  }
  for (std::size_t id : mst_max(g)) sk.tree_.push_back(g.edge(id));

  std::vector<std::size_t> stored;
  for (std::size_t j = 0; j < sk.tree_.size(); ++j) {
    if (stored.empty() || sk.tree_[stored.back()].w / sk.tree_[j].w >= 2.0) stored.push_back(j);
  }

  sk.levels_.resize(stored.size());
  for (std::size_t idx = 0; idx < stored.size(); ++idx) {
    const std::size_t j = stored[idx];
    const double wj = sk.tree_[j].w;
    const double heavy = n * n * wj;
    const double light = wj / cube(n);
    const Contraction con = contraction_for(sk.tree_, sk.n_, heavy, light);

    // Super-vertex ids inside each component follow increasing class representative.
    std::map<Vertex, std::vector<Vertex>> classes_of;
    for (Vertex v = 0; v < sk.n_; ++v) {
      if (con.class_rep[v] == v) classes_of[con.component_rep[v]].push_back(v);
    }
    std::map<Vertex, std::vector<Edge>> edges_of;
    std::vector<Vertex> local(sk.n_, 0);
    for (const auto& [rep, reps] : classes_of) {
      for (std::size_t i = 0; i < reps.size(); ++i) local[reps[i]] = static_cast<Vertex>(i);
    }
    for (const Edge& e : g.edges()) {
      if (e.w < light || e.w >= heavy) continue;
      const Vertex a = con.class_rep[e.u];
      const Vertex b = con.class_rep[e.v];
      if (a == b) continue;
      edges_of[con.component_rep[e.u]].push_back({local[a], local[b], e.w});
    }

    Level& level = sk.levels_[idx];
    level.tree_index = j;
    std::vector<Vertex> reps;
    for (const auto& [rep, members] : classes_of) {
      if (members.size() >= 2) reps.push_back(rep);
    }
    level.pieces.resize(reps.size());
    parallel_for(reps.size(), [&](std::size_t k) {
      const Vertex rep = reps[k];
      const auto found = edges_of.find(rep);
      const std::span<const Edge> edges =
          found == edges_of.end() ? std::span<const Edge>{} : std::span<const Edge>(found->second);
      const WeightedGraph contracted(classes_of.at(rep).size(), edges);
      level.pieces[k] = {rep, CutSketchPoly::build(contracted, epsilon, derive_seed(seed, j, rep), options)};
    });
  }
  return sk;
}

std::vector<std::size_t> CutSketchGeneral::stored_indices() const {
  std::vector<std::size_t> out;
  for (const Level& l : levels_) out.push_back(l.tree_index);
  return out;
}

QueryResult CutSketchGeneral::query(const CutQuery& s) const {
  check_query(s, n_);
  QueryResult r;
  if (trivial_query(s)) return r;
  if (verbatim_) {
    r.value = cut_weight(exact_, s);
    r.bytes_touched = 16 * exact_.num_edges();
    return r;
  }
  std::size_t j = kNoTreeEdge;
  for (std::size_t i = 0; i < tree_.size(); ++i) {
    if (s.contains(tree_[i].u) != s.contains(tree_[i].v)) {
      j = i;
      break;
    }
  }
  r.bytes_touched = 16 * tree_.size();
  if (j == kNoTreeEdge) return r;

  const Level* level = nullptr;
  for (const Level& l : levels_) {
    if (l.tree_index <= j) level = &l;
  }
  const double n = static_cast<double>(n_);
  const double wk = tree_[level->tree_index].w;
  r.tree_index = level->tree_index;
  r.tree_weight = wk;
  const Contraction con = contraction_for(tree_, n_, n * n * wk, wk / cube(n));

  // Per component: query side of each class, with straddle detection.
  std::map<Vertex, std::vector<std::int8_t>> side_of;  // component rep -> per-vertex marker
  std::vector<std::int8_t> class_side(n_, -1);
  for (Vertex v = 0; v < n_; ++v) {
    const Vertex c = con.class_rep[v];
    const std::int8_t in = s.contains(v) ? 1 : 0;
    if (class_side[c] == -1) {
      class_side[c] = in;
    } else if (class_side[c] != in) {
      throw std::logic_error("contraction class straddles the cut query");
    }
  }

  std::vector<double> parts;
  for (const Piece& piece : level->pieces) {
    std::vector<Vertex> reps;
    for (Vertex v = 0; v < n_; ++v) {
      if (con.class_rep[v] == v && con.component_rep[v] == piece.representative) reps.push_back(v);
    }
    if (reps.size() != piece.sketch.num_vertices()) {
      throw std::logic_error("tree-derived contraction disagrees with the stored sketch");
    }
    CutQuery local(reps.size());
    std::size_t inside = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (class_side[reps[i]] == 1) {
        local.set(static_cast<Vertex>(i));
        ++inside;
      }
    }
    if (inside == 0 || inside == reps.size()) continue;
    const QueryResult sub = piece.sketch.query(local);
    parts.push_back(sub.value);
    r.scale = std::max(r.scale, sub.scale);
    r.bytes_touched += sub.bytes_touched;
  }
  r.contributions = parts;
  r.value = pairwise_sum(parts);
  return r;
}

std::size_t CutSketchGeneral::words() const {
  if (verbatim_) return exact_.num_edges();
  std::size_t w = tree_.size();
  for (const Level& l : levels_) {
    for (const Piece& p : l.pieces) w += p.sketch.words();
  }
  return w;
}

void CutSketchGeneral::serialize(ByteWriter& out) const {
  out.u8(verbatim_ ? 1 : 0);
  out.varint(n_);
  out.f64(epsilon_);
  if (verbatim_) {
    write_graph(out, exact_);
    return;
  }
  write_edges(out, tree_);
  out.varint(levels_.size());
  for (const Level& l : levels_) {
    out.varint(l.tree_index);
    out.varint(l.pieces.size());
    for (const Piece& p : l.pieces) {
      out.varint(p.representative);
      const auto token = out.begin_section();
      p.sketch.serialize(out);
      out.end_section(token);
    }
  }
}

CutSketchGeneral CutSketchGeneral::deserialize(ByteReader& in) {
  CutSketchGeneral sk;
  sk.verbatim_ = in.u8() != 0;
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  if (sk.verbatim_) {
    sk.exact_ = read_graph(in);
    return sk;
  }
  sk.tree_ = read_edges(in);
  const std::size_t levels = in.varint();
  for (std::size_t i = 0; i < levels; ++i) {
    Level l;
    l.tree_index = in.varint();
    if (l.tree_index >= sk.tree_.size()) throw FormatError("stored tree index out of range");
    const std::size_t pieces = in.varint();
    for (std::size_t k = 0; k < pieces; ++k) {
      Piece p;
      p.representative = static_cast<Vertex>(in.varint());
      ByteReader sec = in.section();
      p.sketch = CutSketchPoly::deserialize(sec);
      sec.expect_end();
      l.pieces.push_back(std::move(p));
    }
    sk.levels_.push_back(std::move(l));
  }
  return sk;
}

std::vector<std::uint8_t> CutSketchGeneral::to_bytes() const {
  ByteWriter w;
  serialize(w);
  return wrap_envelope(SketchKind::cut_general, w.buffer());
}

CutSketchGeneral CutSketchGeneral::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::cut_general);
  CutSketchGeneral sk = deserialize(in);
  in.expect_end();
  return sk;
}

// ---------------------------------------------------------------------------
// Amplification

AmplifiedCutSketch AmplifiedCutSketch::build(const WeightedGraph& g, double epsilon, std::size_t reps,
                                             std::uint64_t seed, const CutSketchOptions& options) {
  if (reps == 0 || reps % 2 == 0) throw std::invalid_argument("reps must be odd");
  AmplifiedCutSketch sk;
  sk.copies_.resize(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    sk.copies_[i] = CutSketchGeneral::build(g, epsilon, derive_seed(seed, 0xa3, i), options);
  }
  return sk;
}

QueryResult AmplifiedCutSketch::query(const CutQuery& s) const {
  QueryResult r;
  for (const CutSketchGeneral& c : copies_) {
    const QueryResult one = c.query(s);
    r.contributions.push_back(one.value);
    r.bytes_touched += one.bytes_touched;
  }
  r.value = median(r.contributions);
  return r;
}

std::size_t AmplifiedCutSketch::words() const {
  std::size_t w = 0;
  for (const CutSketchGeneral& c : copies_) w += c.words();
  return w;
}

std::vector<std::uint8_t> AmplifiedCutSketch::to_bytes() const {
  ByteWriter w;
  w.varint(copies_.size());
  for (const CutSketchGeneral& c : copies_) {
    const auto token = w.begin_section();
    c.serialize(w);
    w.end_section(token);
  }
  return wrap_envelope(SketchKind::cut_amplified, w.buffer());
}

AmplifiedCutSketch AmplifiedCutSketch::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::cut_amplified);
  AmplifiedCutSketch sk;
  const std::size_t reps = in.varint();
  for (std::size_t i = 0; i < reps; ++i) {
    ByteReader sec = in.section();
    sk.copies_.push_back(CutSketchGeneral::deserialize(sec));
    sec.expect_end();
  }
  in.expect_end();
  return sk;
}

double amplified_estimate(const CutEstimator& estimator, const WeightedGraph& g, const CutQuery& s,
                          double epsilon, std::size_t reps, std::uint64_t seed) {
  if (reps == 0 || reps % 2 == 0) throw std::invalid_argument("reps must be odd");
  if (reps == 1) return estimator(g, s, epsilon, seed);
  std::vector<double> values(reps);
  for (std::size_t i = 0; i < reps; ++i) values[i] = estimator(g, s, epsilon, derive_seed(seed, 0xa3, i));
  return median(std::move(values));
}

}  // namespace quadsketch
