#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "quadsketch/graph.hpp"

namespace quadsketch {

enum class EdgeSplit { round_robin, random, by_vertex_hash };

/// k disjoint lists of edge indices covering every edge of g.
std::vector<std::vector<std::size_t>> partition_edges(const WeightedGraph& g, std::size_t k, EdgeSplit strategy,
                                                      std::uint64_t seed = 0);

/// Cuts of h within `factor` of its minimum: exhaustive for n <= 20, otherwise
/// singletons plus repeated weighted contraction down to three super-vertices.
/// Each cut is reported by the side not containing vertex 0, sorted.
std::vector<CutQuery> near_min_cut_candidates(const WeightedGraph& h, double factor, std::uint64_t seed,
                                              std::size_t trials = 0);

struct ProtocolOptions {
  std::size_t servers = 2;
  double epsilon = 0.1;
  std::size_t reps = 9;
  std::uint64_t seed = 0;
  EdgeSplit split = EdgeSplit::round_robin;
  double sparsifier_epsilon = 0.2;
  double candidate_factor = 1.5;
  std::size_t contraction_trials = 0;  // 0 picks n^2 ln n, clamped to [200, 20000]
  std::size_t max_vertices = 64;
};

struct ServerMessage {
  std::size_t server = 0;
  std::size_t edges = 0;
  std::vector<std::uint8_t> sketch;
  std::vector<std::uint8_t> sparsifier;

  std::size_t bytes() const noexcept { return sketch.size() + sparsifier.size(); }
};

struct ProtocolTranscript {
  std::vector<ServerMessage> messages;
  std::size_t total_bytes = 0;
  std::size_t candidates = 0;
  double sparsifier_min = 0.0;
  CutQuery cut;
  double estimate = 0.0;
};

/// Servers sketch their shares, the coordinator merges the sparsifiers,
/// enumerates near-minimum cuts and returns the one with the smallest summed
/// estimate. Throws std::invalid_argument on disconnected or oversized input.
ProtocolTranscript run_protocol(const WeightedGraph& g, const ProtocolOptions& options);

}  // namespace quadsketch
