#include "quadsketch/spectral_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "quadsketch/numeric.hpp"
#include "quadsketch/parallel.hpp"
#include "quadsketch/partition.hpp"
#include "quadsketch/random.hpp"
#include "quadsketch/sparsify.hpp"

namespace quadsketch {

namespace {

std::size_t draw_count(double x) { return static_cast<std::size_t>(std::max(1.0, std::ceil(x - 1e-9))); }

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
}

void check_vector(std::span<const double> x, std::size_t n) {
  if (x.size() != n) throw DimensionError("vector length does not match the vertex count");
}

std::vector<std::size_t> multinomial(const oracle::SamplingSlot& slot, Rng& rng) {
  std::vector<std::size_t> counts(slot.probabilities.size(), 0);
  const DiscreteSampler sampler(slot.probabilities);
  for (std::size_t k = 0; k < slot.draws; ++k) ++counts[sampler(rng)];
  return counts;
}

// Hands out the next outcome vector, checking it against its slot.
struct CountFeed {
  const oracle::OutcomeCounts& counts;
  std::size_t next = 0;

  std::vector<std::size_t> operator()(const oracle::SamplingSlot& slot) {
    if (next >= counts.size()) throw std::invalid_argument("too few outcome vectors");
    const auto& c = counts[next++];
    if (c.size() != slot.probabilities.size()) throw std::invalid_argument("outcome vector has wrong length");
    std::size_t total = 0;
    for (std::size_t v : c) total += v;
    if (total != slot.draws) throw std::invalid_argument("outcome vector does not sum to the draw count");
    return c;
  }
  void finish() const {
    if (next != counts.size()) throw std::invalid_argument("too many outcome vectors");
  }
};

struct SlotRecorder {
  std::vector<oracle::SamplingSlot>& slots;
  std::vector<std::size_t> operator()(const oracle::SamplingSlot& slot) {
    slots.push_back(slot);
    return std::vector<std::size_t>(slot.probabilities.size(), 0);
  }
};

double exact_form(std::span<const Edge> edges, std::span<const double> x) {
  std::vector<double> terms;
  terms.reserve(edges.size());
  for (const Edge& e : edges) {
    const double d = x[e.u] - x[e.v];
    terms.push_back(e.w * d * d);
  }
  return pairwise_sum(terms);
}

std::vector<double> restrict_to(std::span<const double> x, std::span<const Vertex> vertices) {
  std::vector<double> local(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) local[i] = x[vertices[i]];
  return local;
}

void write_vertices(ByteWriter& out, std::span<const Vertex> vs) {
  out.varint(vs.size());
  for (Vertex v : vs) out.varint(v);
}

std::vector<Vertex> read_vertices(ByteReader& in, std::size_t n) {
  const std::size_t k = in.varint();
  std::vector<Vertex> vs(k);
  for (auto& v : vs) {
    v = static_cast<Vertex>(in.varint());
    if (v >= n) throw FormatError("vertex id out of range");
  }
  return vs;
}

}  // namespace

double SpectralParams::alpha_for(double epsilon) const {
  return alpha ? *alpha : c_alpha * std::pow(epsilon, -5.0 / 3.0);
}

double SpectralParams::beta_for(double epsilon) const {
  return beta ? *beta : c_beta * std::pow(epsilon, -1.6);
}

// ---------------------------------------------------------------------------
// S2Sketch

template <class Draw>
S2Sketch S2Sketch::assemble(const WeightedGraph& p, double epsilon, const SpectralParams& params,
                            std::optional<double> gamma, Draw&& draw) {
  check_epsilon(epsilon);
  const std::size_t n = p.num_vertices();
  S2Sketch sk;
  sk.epsilon_ = epsilon;
  sk.alpha_ = params.alpha_for(epsilon);
  if (!(sk.alpha_ > 0.0)) throw std::invalid_argument("alpha must be positive");
  sk.draws_ = draw_count(sk.alpha_);
  sk.gamma_ = gamma ? *gamma : p.min_weight();
  sk.degree_.resize(n);
  sk.heavy_.assign(n, 0);
  sk.heavy_degree_.assign(n, 0.0);
  const double light_limit = sk.gamma_ * sk.alpha_;
  for (Vertex u = 0; u < n; ++u) {
    sk.degree_[u] = p.weighted_degree(u);
    sk.heavy_[u] = sk.degree_[u] > light_limit ? 1 : 0;
  }
  for (const Edge& e : p.edges()) {
    if (!sk.heavy_[e.u] || !sk.heavy_[e.v]) sk.light_edges_.push_back(e);
  }
  sk.offsets_.assign(1, 0);
  for (Vertex u = 0; u < n; ++u) {
    if (sk.heavy_[u]) {
      std::vector<Vertex> nbrs;
      std::vector<double> ws;
      for (const Incidence& inc : p.neighbors(u)) {
        if (!sk.heavy_[inc.neighbor]) continue;
        nbrs.push_back(inc.neighbor);
        ws.push_back(inc.w);
      }
      const double total = pairwise_sum(ws);
      sk.heavy_degree_[u] = total;
      if (total > 0.0) {
        oracle::SamplingSlot slot;
        slot.draws = sk.draws_;
        for (double w : ws) slot.probabilities.push_back(w / total);
        const std::vector<std::size_t> counts = draw(slot);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
          if (counts[k] > 0) sk.samples_.push_back({nbrs[k], static_cast<std::uint32_t>(counts[k])});
        }
      }
    }
    sk.offsets_.push_back(sk.samples_.size());
  }
  return sk;
}

S2Sketch S2Sketch::build(const WeightedGraph& p, double epsilon, std::uint64_t seed,
                         const SpectralParams& params, std::optional<double> gamma) {
  Rng rng(seed);
  return assemble(p, epsilon, params, gamma,
                  [&](const oracle::SamplingSlot& slot) { return multinomial(slot, rng); });
}

std::vector<oracle::SamplingSlot> S2Sketch::sampling_slots(const WeightedGraph& p, double epsilon,
                                                           const SpectralParams& params,
                                                           std::optional<double> gamma) {
  std::vector<oracle::SamplingSlot> slots;
  assemble(p, epsilon, params, gamma, SlotRecorder{slots});
  return slots;
}

S2Sketch S2Sketch::from_counts(const WeightedGraph& p, double epsilon, const oracle::OutcomeCounts& counts,
                               const SpectralParams& params, std::optional<double> gamma) {
  CountFeed feed{counts};
  S2Sketch sk = assemble(p, epsilon, params, gamma, [&](const oracle::SamplingSlot& s) { return feed(s); });
  feed.finish();
  return sk;
}

double S2Sketch::estimate(std::span<const double> x) const {
  const std::size_t n = num_vertices();
  check_vector(x, n);
  // Same estimator regrouped: delta_u = (light edges at u) + delta^L_u, so the
  // degree terms fold into the light edges and the sampled draws. Every term
  // then vanishes on constant vectors.
  std::vector<double> terms;
  terms.reserve(light_edges_.size() + samples_.size());
  for (const Edge& e : light_edges_) {
    const double d = x[e.u] - x[e.v];
    terms.push_back(e.w * d * d);
  }
  const double inv = 1.0 / static_cast<double>(draws_);
  for (Vertex u = 0; u < n; ++u) {
    const double scale = heavy_degree_[u] * inv * x[u];
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
      terms.push_back(scale * static_cast<double>(samples_[k].count) * (x[u] - x[samples_[k].neighbor]));
    }
  }
  return pairwise_sum(terms);
}

std::size_t S2Sketch::heavy_count() const {
  return static_cast<std::size_t>(std::count(heavy_.begin(), heavy_.end(), std::uint8_t{1}));
}

std::size_t S2Sketch::sampled_vertices() const {
  std::size_t k = 0;
  for (std::size_t u = 0; u < num_vertices(); ++u) k += offsets_[u + 1] > offsets_[u] ? 1 : 0;
  return k;
}

std::size_t S2Sketch::words() const {
  return num_vertices() + heavy_count() + light_edges_.size() + samples_.size();
}

void S2Sketch::serialize(ByteWriter& out) const {
  out.f64(epsilon_);
  out.f64(alpha_);
  out.f64(gamma_);
  const std::size_t n = num_vertices();
  out.varint(n);
  for (Vertex u = 0; u < n; ++u) {
    out.f64(degree_[u]);
    out.u8(heavy_[u]);
    if (!heavy_[u]) continue;
    out.f64(heavy_degree_[u]);
    out.varint(offsets_[u + 1] - offsets_[u]);
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) {
      out.varint(samples_[k].neighbor);
      out.varint(samples_[k].count);
    }
  }
  write_edges(out, light_edges_);
}

S2Sketch S2Sketch::deserialize(ByteReader& in) {
  S2Sketch sk;
  sk.epsilon_ = in.f64();
  sk.alpha_ = in.f64();
  if (!(sk.alpha_ > 0.0)) throw FormatError("alpha must be positive");
  sk.draws_ = draw_count(sk.alpha_);
  sk.gamma_ = in.f64();
  const std::size_t n = in.varint();
  sk.degree_.resize(n);
  sk.heavy_.assign(n, 0);
  sk.heavy_degree_.assign(n, 0.0);
  sk.offsets_.assign(1, 0);
  for (std::size_t u = 0; u < n; ++u) {
    sk.degree_[u] = in.f64();
    sk.heavy_[u] = in.u8();
    if (sk.heavy_[u] > 1) throw FormatError("bad heavy flag");
    if (sk.heavy_[u]) {
      sk.heavy_degree_[u] = in.f64();
      const std::size_t k = in.varint();
      for (std::size_t i = 0; i < k; ++i) {
        Sample s;
        s.neighbor = static_cast<Vertex>(in.varint());
        if (s.neighbor >= n) throw FormatError("sample neighbor out of range");
        s.count = static_cast<std::uint32_t>(in.varint());
        sk.samples_.push_back(s);
      }
    }
    sk.offsets_.push_back(sk.samples_.size());
  }
  sk.light_edges_ = read_edges(in);
  for (const Edge& e : sk.light_edges_) {
    if (e.u >= n || e.v >= n) throw FormatError("edge endpoint out of range");
  }
  return sk;
}

// ---------------------------------------------------------------------------
// S3Sketch

template <class Draw>
S3Sketch S3Sketch::assemble(const DirectedGraph& arcs, int kappa, double epsilon,
                            const SpectralParams& params, Draw&& draw) {
  check_epsilon(epsilon);
  if (kappa < 0) throw std::invalid_argument("band index must be non-negative");
  S3Sketch sk;
  sk.n_ = arcs.num_vertices();
  sk.epsilon_ = epsilon;
  sk.beta_ = params.beta_for(epsilon);
  if (!(sk.beta_ > 0.0)) throw std::invalid_argument("beta must be positive");
  sk.draws_ = draw_count(sk.beta_);
  sk.kappa_ = kappa;
  sk.threshold_ = params.s3_threshold == S3Threshold::two_pow_minus_kappa
                      ? std::ldexp(1.0, -kappa)
                      : sk.beta_ * epsilon * epsilon;

  const WeightedGraph g = arcs.undirected();
  if (g.num_edges() != arcs.num_arcs()) throw std::invalid_argument("arcs must join distinct vertex pairs");
  const PartitionResult parts = spectral_preprocessing(g, sk.threshold_);
  for (std::size_t e : parts.cross_edges) sk.cross_.push_back(g.edge(e));

  const double light_below = std::ldexp(sk.beta_, kappa - 1);
  std::vector<Vertex> local_id(sk.n_, 0);
  for (const Subgraph& piece : parts.components) {
    const std::size_t k = piece.to_parent.size();
    for (std::size_t i = 0; i < k; ++i) local_id[piece.to_parent[i]] = static_cast<Vertex>(i);
    Component comp;
    comp.vertices = piece.to_parent;
    comp.degree.resize(k);
    for (Vertex i = 0; i < k; ++i) comp.degree[i] = piece.graph.weighted_degree(i);

    std::vector<Arc> local;
    local.reserve(piece.edge_origin.size());
    std::vector<std::size_t> outdeg(k, 0);
    for (std::size_t e : piece.edge_origin) {
      const Arc& a = arcs.arcs()[e];
      local.push_back({local_id[a.tail], local_id[a.head], a.w});
      ++outdeg[local.back().tail];
    }
    std::vector<std::vector<std::size_t>> incoming(k);
    for (std::size_t i = 0; i < local.size(); ++i) {
      const Arc& a = local[i];
      if (static_cast<double>(outdeg[a.tail]) < light_below) {
        comp.light_arcs.push_back(a);
      } else {
        incoming[a.head].push_back(i);
      }
    }
    comp.heavy_in_degree.assign(k, 0.0);
    for (Vertex u = 0; u < k; ++u) {
      std::vector<double> ws;
      for (std::size_t i : incoming[u]) ws.push_back(local[i].w);
      const double total = pairwise_sum(ws);
      comp.heavy_in_degree[u] = total;
      if (total > 0.0) {
        oracle::SamplingSlot slot;
        slot.draws = sk.draws_;
        for (double w : ws) slot.probabilities.push_back(w / total);
        const std::vector<std::size_t> counts = draw(slot);
        for (std::size_t j = 0; j < incoming[u].size(); ++j) {
          if (counts[j] > 0) {
            comp.samples.push_back({local[incoming[u][j]].tail, static_cast<std::uint32_t>(counts[j])});
          }
        }
      }
      comp.offsets.push_back(comp.samples.size());
    }
    sk.components_.push_back(std::move(comp));
  }
  return sk;
}

S3Sketch S3Sketch::build(const DirectedGraph& arcs, int kappa, double epsilon, std::uint64_t seed,
                         const SpectralParams& params) {
  Rng rng(seed);
  return assemble(arcs, kappa, epsilon, params,
                  [&](const oracle::SamplingSlot& slot) { return multinomial(slot, rng); });
}

std::vector<oracle::SamplingSlot> S3Sketch::sampling_slots(const DirectedGraph& arcs, int kappa,
                                                           double epsilon, const SpectralParams& params) {
  std::vector<oracle::SamplingSlot> slots;
  assemble(arcs, kappa, epsilon, params, SlotRecorder{slots});
  return slots;
}

S3Sketch S3Sketch::from_counts(const DirectedGraph& arcs, int kappa, double epsilon,
                               const oracle::OutcomeCounts& counts, const SpectralParams& params) {
  CountFeed feed{counts};
  S3Sketch sk = assemble(arcs, kappa, epsilon, params, [&](const oracle::SamplingSlot& s) { return feed(s); });
  feed.finish();
  return sk;
}

double S3Sketch::estimate(std::span<const double> x) const {
  check_vector(x, n_);
  std::vector<double> terms;
  terms.push_back(exact_form(cross_, x));
  const double inv = 1.0 / static_cast<double>(draws_);
  for (const Component& comp : components_) {
    const std::vector<double> y = restrict_to(x, comp.vertices);
    std::vector<double> parts;
    for (std::size_t u = 0; u < y.size(); ++u) parts.push_back(comp.degree[u] * y[u] * y[u]);
    for (const Arc& a : comp.light_arcs) parts.push_back(-2.0 * a.w * y[a.tail] * y[a.head]);
    for (std::size_t u = 0; u < y.size(); ++u) {
      const double scale = 2.0 * comp.heavy_in_degree[u] * inv * y[u];
      for (std::size_t k = comp.offsets[u]; k < comp.offsets[u + 1]; ++k) {
        parts.push_back(-scale * static_cast<double>(comp.samples[k].count) * y[comp.samples[k].tail]);
      }
    }
    terms.push_back(pairwise_sum(parts));
  }
  return pairwise_sum(terms);
}

std::size_t S3Sketch::sampled_vertices() const {
  std::size_t k = 0;
  for (const Component& c : components_) {
    for (std::size_t u = 0; u < c.vertices.size(); ++u) k += c.offsets[u + 1] > c.offsets[u] ? 1 : 0;
  }
  return k;
}

std::size_t S3Sketch::words() const {
  std::size_t w = cross_.size();
  for (const Component& c : components_) w += 2 * c.vertices.size() + c.light_arcs.size() + c.samples.size();
  return w;
}

void S3Sketch::serialize(ByteWriter& out) const {
  out.varint(n_);
  out.f64(epsilon_);
  out.f64(beta_);
  out.varint(static_cast<std::uint64_t>(kappa_));
  out.f64(threshold_);
  write_edges(out, cross_);
  out.varint(components_.size());
  for (const Component& c : components_) {
    write_vertices(out, c.vertices);
    for (std::size_t u = 0; u < c.vertices.size(); ++u) {
      out.f64(c.degree[u]);
      out.f64(c.heavy_in_degree[u]);
      out.varint(c.offsets[u + 1] - c.offsets[u]);
      for (std::size_t k = c.offsets[u]; k < c.offsets[u + 1]; ++k) {
        out.varint(c.samples[k].tail);
        out.varint(c.samples[k].count);
      }
    }
    out.varint(c.light_arcs.size());
    for (const Arc& a : c.light_arcs) {
      out.varint(a.tail);
      out.varint(a.head);
      out.f64(a.w);
    }
  }
}

S3Sketch S3Sketch::deserialize(ByteReader& in) {
  S3Sketch sk;
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  sk.beta_ = in.f64();
  if (!(sk.beta_ > 0.0)) throw FormatError("beta must be positive");
  sk.draws_ = draw_count(sk.beta_);
  sk.kappa_ = static_cast<int>(in.varint());
  sk.threshold_ = in.f64();
  sk.cross_ = read_edges(in);
  for (const Edge& e : sk.cross_) {
    if (e.u >= sk.n_ || e.v >= sk.n_) throw FormatError("edge endpoint out of range");
  }
  const std::size_t count = in.varint();
  for (std::size_t c = 0; c < count; ++c) {
    Component comp;
    comp.vertices = read_vertices(in, sk.n_);
    const std::size_t k = comp.vertices.size();
    comp.degree.resize(k);
    comp.heavy_in_degree.resize(k);
    for (std::size_t u = 0; u < k; ++u) {
      comp.degree[u] = in.f64();
      comp.heavy_in_degree[u] = in.f64();
      const std::size_t s = in.varint();
      for (std::size_t i = 0; i < s; ++i) {
        Sample smp;
        smp.tail = static_cast<Vertex>(in.varint());
        if (smp.tail >= k) throw FormatError("sample tail out of range");
        smp.count = static_cast<std::uint32_t>(in.varint());
        comp.samples.push_back(smp);
      }
      comp.offsets.push_back(comp.samples.size());
    }
    const std::size_t arcs = in.varint();
    for (std::size_t i = 0; i < arcs; ++i) {
      Arc a;
      a.tail = static_cast<Vertex>(in.varint());
      a.head = static_cast<Vertex>(in.varint());
      a.w = in.f64();
      if (a.tail >= k || a.head >= k) throw FormatError("arc endpoint out of range");
      comp.light_arcs.push_back(a);
    }
    sk.components_.push_back(std::move(comp));
  }
  return sk;
}

// ---------------------------------------------------------------------------
// SpectralBasicSketch

SpectralBasicSketch SpectralBasicSketch::build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                               const SpectralParams& params) {
  check_epsilon(epsilon);
  SpectralBasicSketch sk;
  sk.n_ = g.num_vertices();
  sk.epsilon_ = epsilon;

  WeightedGraph h = g;
  if (params.sparsify) {
    SparsifierConfig cfg;
    cfg.epsilon = epsilon;
    cfg.kind = SparsifierKind::spectral;
    cfg.seed = derive_seed(seed, 1);
    cfg.oversampling = params.oversampling;
    h = sparsify(g, cfg);
  }
  if (h.num_edges() == 0) return sk;

  const double w0 = h.min_weight();
  std::map<int, std::vector<Edge>> by_class;
  for (const Edge& e : h.edges()) {
    int i = static_cast<int>(std::floor(std::log2(e.w / w0)));
    while (i > 0 && std::ldexp(w0, i) > e.w) --i;
    while (std::ldexp(w0, i + 1) <= e.w) ++i;
    by_class[i].push_back(e);
  }
  std::vector<std::pair<int, std::vector<Edge>>> classes(by_class.begin(), by_class.end());

  const double threshold = params.alpha_for(epsilon) * epsilon * epsilon;
  struct ClassOut {
    std::vector<Edge> exact;
    std::vector<Piece> pieces;
  };
  std::vector<ClassOut> outs(classes.size());
  parallel_for(classes.size(), [&](std::size_t c) {
    const int index = classes[c].first;
    const WeightedGraph cls(sk.n_, classes[c].second);
    const PartitionResult parts = spectral_preprocessing(cls, threshold);
    ClassOut& out = outs[c];
    for (std::size_t e : parts.cross_edges) out.exact.push_back(cls.edge(e));
    const double gamma = std::ldexp(w0, index);
    for (std::size_t k = 0; k < parts.components.size(); ++k) {
      const Subgraph& piece = parts.components[k];
      const std::uint64_t s = derive_seed(seed, 0x5b00 + static_cast<std::uint64_t>(c), k);
      out.pieces.push_back({piece.to_parent, S2Sketch::build(piece.graph, epsilon, s, params, gamma)});
    }
  });
  for (ClassOut& out : outs) {
    sk.exact_.insert(sk.exact_.end(), out.exact.begin(), out.exact.end());
    for (Piece& p : out.pieces) sk.pieces_.push_back(std::move(p));
  }
  return sk;
}

double SpectralBasicSketch::estimate(std::span<const double> x) const {
  check_vector(x, n_);
  std::vector<double> terms;
  terms.push_back(exact_form(exact_, x));
  for (const Piece& p : pieces_) terms.push_back(p.sketch.estimate(restrict_to(x, p.vertices)));
  return pairwise_sum(terms);
}

std::size_t SpectralBasicSketch::sampled_vertices() const {
  std::size_t k = 0;
  for (const Piece& p : pieces_) k += p.sketch.sampled_vertices();
  return k;
}

std::size_t SpectralBasicSketch::words() const {
  std::size_t w = exact_.size();
  for (const Piece& p : pieces_) w += p.sketch.words();
  return w;
}

std::vector<std::uint8_t> SpectralBasicSketch::to_bytes() const {
  ByteWriter out;
  out.varint(n_);
  out.f64(epsilon_);
  write_edges(out, exact_);
  out.varint(pieces_.size());
  for (const Piece& p : pieces_) {
    const std::size_t token = out.begin_section();
    write_vertices(out, p.vertices);
    p.sketch.serialize(out);
    out.end_section(token);
  }
  return wrap_envelope(SketchKind::spectral_basic, out.buffer());
}

SpectralBasicSketch SpectralBasicSketch::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::spectral_basic);
  SpectralBasicSketch sk;
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  sk.exact_ = read_edges(in);
  for (const Edge& e : sk.exact_) {
    if (e.u >= sk.n_ || e.v >= sk.n_) throw FormatError("edge endpoint out of range");
  }
  const std::size_t count = in.varint();
  for (std::size_t i = 0; i < count; ++i) {
    ByteReader sec = in.section();
    Piece p;
    p.vertices = read_vertices(sec, sk.n_);
    p.sketch = S2Sketch::deserialize(sec);
    sec.expect_end();
    if (p.sketch.num_vertices() != p.vertices.size()) throw FormatError("piece size mismatch");
    sk.pieces_.push_back(std::move(p));
  }
  in.expect_end();
  return sk;
}

// ---------------------------------------------------------------------------
// SpectralImprovedSketch

SpectralImprovedSketch SpectralImprovedSketch::build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                                     const SpectralParams& params) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
  SpectralImprovedSketch sk;
  sk.n_ = g.num_vertices();
  sk.epsilon_ = epsilon;

  DegreeClassOptions opts;
  opts.c_beta = params.beta_for(epsilon) / std::pow(epsilon, -1.6);
  opts.seed = derive_seed(seed, 1);
  opts.oversampling = params.oversampling;
  const DegreeClassPartition partition = degree_class_partition(g, epsilon, opts);

  std::vector<std::size_t> indexed;
  for (std::size_t i = 0; i < partition.classes.size(); ++i) {
    const DegreeClass& cls = partition.classes[i];
    if (cls.kind == DegreeClassKind::indexed) {
      indexed.push_back(i);
      continue;
    }
    for (const Arc& a : cls.arcs.arcs()) sk.exact_.push_back({a.tail, a.head, a.w});
  }
  sk.classes_.resize(indexed.size());
  parallel_for(indexed.size(), [&](std::size_t k) {
    const DegreeClass& cls = partition.classes[indexed[k]];
    sk.classes_[k] = S3Sketch::build(cls.arcs, cls.band, epsilon, derive_seed(seed, 2, indexed[k]), params);
  });
  return sk;
}

double SpectralImprovedSketch::estimate(std::span<const double> x) const {
  check_vector(x, n_);
  std::vector<double> terms;
  terms.push_back(exact_form(exact_, x));
  for (const S3Sketch& s : classes_) terms.push_back(s.estimate(x));
  return pairwise_sum(terms);
}

std::size_t SpectralImprovedSketch::sampled_vertices() const {
  std::size_t k = 0;
  for (const S3Sketch& s : classes_) k += s.sampled_vertices();
  return k;
}

std::size_t SpectralImprovedSketch::words() const {
  std::size_t w = exact_.size();
  for (const S3Sketch& s : classes_) w += s.words();
  return w;
}

std::vector<std::uint8_t> SpectralImprovedSketch::to_bytes() const {
  ByteWriter out;
  out.varint(n_);
  out.f64(epsilon_);
  write_edges(out, exact_);
  out.varint(classes_.size());
  for (const S3Sketch& s : classes_) {
    const std::size_t token = out.begin_section();
    s.serialize(out);
    out.end_section(token);
  }
  return wrap_envelope(SketchKind::spectral_improved, out.buffer());
}

SpectralImprovedSketch SpectralImprovedSketch::from_bytes(std::span<const std::uint8_t> bytes) {
  ByteReader in = open_envelope(bytes, SketchKind::spectral_improved);
  SpectralImprovedSketch sk;
  sk.n_ = in.varint();
  sk.epsilon_ = in.f64();
  sk.exact_ = read_edges(in);
  for (const Edge& e : sk.exact_) {
    if (e.u >= sk.n_ || e.v >= sk.n_) throw FormatError("edge endpoint out of range");
  }
  const std::size_t count = in.varint();
  for (std::size_t i = 0; i < count; ++i) {
    ByteReader sec = in.section();
    S3Sketch s = S3Sketch::deserialize(sec);
    sec.expect_end();
    if (s.num_vertices() != sk.n_) throw FormatError("class vertex count mismatch");
    sk.classes_.push_back(std::move(s));
  }
  in.expect_end();
  return sk;
}

}  // namespace quadsketch
