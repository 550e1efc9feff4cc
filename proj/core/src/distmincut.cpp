#include "quadsketch/distmincut.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "quadsketch/cut_sketch.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/parallel.hpp"
#include "quadsketch/random.hpp"
#include "quadsketch/serialize.hpp"
#include "quadsketch/sparsify.hpp"

namespace quadsketch {

namespace {

CutQuery canonical(CutQuery s) { return s.contains(0) ? s.complement() : s; }

bool cut_less(const CutQuery& a, const CutQuery& b) {
  for (Vertex u = 0; u < a.size(); ++u) {
    if (a.contains(u) != b.contains(u)) return b.contains(u);
  }
  return false;
}

}  // namespace

std::vector<std::vector<std::size_t>> partition_edges(const WeightedGraph& g, std::size_t k, EdgeSplit strategy,
                                                      std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("need at least one server");
  std::vector<std::vector<std::size_t>> parts(k);
  Rng rng(derive_seed(seed, 0xd150));
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    std::size_t to = 0;
    switch (strategy) {
      case EdgeSplit::round_robin:
        to = i % k;
        break;
      case EdgeSplit::random:
        to = static_cast<std::size_t>(rng.below(k));
        break;
      case EdgeSplit::by_vertex_hash:
        to = static_cast<std::size_t>(derive_seed(seed, g.edge(i).u) % k);
        break;
    }
    parts[to].push_back(i);
  }
  return parts;
}

std::vector<CutQuery> near_min_cut_candidates(const WeightedGraph& h, double factor, std::uint64_t seed,
                                              std::size_t trials) {
  const std::size_t n = h.num_vertices();
  if (n < 2) return {};
  if (!(factor >= 1.0)) throw std::invalid_argument("factor must be at least 1");
  std::vector<CutQuery> found;
  if (n <= 20) {
    for (CutQuery& s : oracle::near_min_cuts_exhaustive(h, factor)) found.push_back(canonical(std::move(s)));
  } else {
    const double best = oracle::min_cut_exact(h).value;
    const double limit = factor * best * (1.0 + 1e-12);
    std::vector<CutQuery> raw;
    raw.push_back(oracle::min_cut_exact(h).side);
    for (Vertex u = 0; u < n; ++u) raw.push_back(CutQuery::from_members(n, std::span<const Vertex>(&u, 1)));

    if (trials == 0) {
      const double nn = static_cast<double>(n);
      trials = static_cast<std::size_t>(std::clamp(nn * nn * std::log(nn), 200.0, 20000.0));
    }
    Rng rng(derive_seed(seed, 0xd153));
    const auto edges = h.edges();
    std::vector<std::pair<double, std::size_t>> keys(edges.size());
    for (std::size_t t = 0; t < trials; ++t) {
      // Exponential clocks: sorting by -ln(U)/w is contraction with
      // probability proportional to weight.
      for (std::size_t i = 0; i < edges.size(); ++i) {
        keys[i] = {-std::log1p(-rng.uniform()) / edges[i].w, i};
      }
      std::sort(keys.begin(), keys.end());
      UnionFind uf(n);
      for (const auto& [key, i] : keys) {
        if (uf.components() <= 3) break;
        uf.unite(edges[i].u, edges[i].v);
      }
      std::vector<std::size_t> roots;
      for (Vertex u = 0; u < n; ++u) {
        const std::size_t r = uf.find(u);
        if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
      }
      if (roots.size() < 2) continue;
      for (std::size_t r : roots) {
        CutQuery s(n);
        for (Vertex u = 0; u < n; ++u) s.set(u, uf.find(u) == r);
        raw.push_back(std::move(s));
      }
    }
    for (CutQuery& s : raw) {
      if (s.empty_set() || s.full_set()) continue;
      if (cut_weight(h, s) <= limit) found.push_back(canonical(std::move(s)));
    }
  }
  std::sort(found.begin(), found.end(), cut_less);
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

ProtocolTranscript run_protocol(const WeightedGraph& g, const ProtocolOptions& options) {
  const std::size_t n = g.num_vertices();
  if (n > options.max_vertices) throw std::invalid_argument("graph exceeds the protocol vertex limit");
  if (n < 2 || !is_connected(g)) throw std::invalid_argument("protocol requires a connected graph");
  if (options.reps == 0 || options.reps % 2 == 0) throw std::invalid_argument("reps must be odd");

  const auto shares = partition_edges(g, options.servers, options.split, options.seed);
  ProtocolTranscript tr;
  tr.messages.resize(shares.size());
  parallel_for(shares.size(), [&](std::size_t i) {
    std::vector<Edge> edges;
    for (std::size_t e : shares[i]) edges.push_back(g.edge(e));
    const WeightedGraph share(n, edges);
    ServerMessage& msg = tr.messages[i];
    msg.server = i;
    msg.edges = edges.size();
    msg.sketch =
        AmplifiedCutSketch::build(share, options.epsilon, options.reps, derive_seed(options.seed, 0xd151, i))
            .to_bytes();
    SparsifierConfig cfg;
    cfg.epsilon = options.sparsifier_epsilon;
    cfg.kind = SparsifierKind::cut;
    cfg.seed = derive_seed(options.seed, 0xd152, i);
    msg.sparsifier = graph_to_bytes(sparsify(share, cfg));
  });

  // Coordinator: only the serialized messages are used from here on.
  std::vector<AmplifiedCutSketch> sketches;
  std::vector<Edge> merged_edges;
  for (const ServerMessage& msg : tr.messages) {
    tr.total_bytes += msg.bytes();
    sketches.push_back(AmplifiedCutSketch::from_bytes(msg.sketch));
    const WeightedGraph sp = graph_from_bytes(msg.sparsifier);
    if (sp.num_vertices() != n) throw FormatError("sparsifier vertex count mismatch");
    merged_edges.insert(merged_edges.end(), sp.edges().begin(), sp.edges().end());
  }
  const WeightedGraph merged(n, merged_edges);
  tr.sparsifier_min = oracle::min_cut_exact(merged).value;

  const auto candidates = near_min_cut_candidates(merged, options.candidate_factor, options.seed,
                                                  options.contraction_trials);
  tr.candidates = candidates.size();
  if (candidates.empty()) throw std::logic_error("no candidate cuts");
  bool first = true;
  for (const CutQuery& s : candidates) {
    std::vector<double> parts;
    for (const AmplifiedCutSketch& sk : sketches) parts.push_back(sk.estimate(s));
    const double total = std::accumulate(parts.begin(), parts.end(), 0.0);
    if (first || total < tr.estimate) {
      tr.estimate = total;
      tr.cut = s;
      first = false;
    }
  }
  return tr;
}

}  // namespace quadsketch
