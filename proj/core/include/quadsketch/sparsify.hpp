#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "quadsketch/graph.hpp"

namespace quadsketch {

enum class SparsifierKind { cut, spectral };

struct SparsifierConfig {
  double epsilon = 0.2;
  SparsifierKind kind = SparsifierKind::spectral;
  std::uint64_t seed = 0;
  // Inputs with at most this many edges are returned unchanged.
  std::size_t keep_all_threshold = 0;
  // Multiplier C in p_e = min(1, C ln(n) w_e R_e / eps^2).
  double oversampling = 4.0;
  // Largest component whose effective resistances are solved densely.
  std::size_t dense_limit = 512;
};

/// w_e * R_e for every edge (its leverage score). Components larger than
/// `dense_limit` are not solved; their entries are NaN.
std::vector<double> leverage_scores(const WeightedGraph& g, std::size_t dense_limit = 512);

/// Keep-probability of every edge under `cfg`.
std::vector<double> sampling_probabilities(const WeightedGraph& g, const SparsifierConfig& cfg);

/// Importance-sampled reweighted subgraph on the same vertex set. Edges are
/// kept with sampling_probabilities() and reweighted by 1/p; afterwards any
/// edge lighter than (heaviest kept weight) / n^6 is dropped.
WeightedGraph sparsify(const WeightedGraph& g, const SparsifierConfig& cfg);

}  // namespace quadsketch
