#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "quadsketch/graph.hpp"
#include "quadsketch/sparsify.hpp"

namespace quadsketch {

enum class CutMode {
  // |boundary(S)| / |S| < threshold, unweighted, |S| <= n/2.
  edge_expansion,
  // w(S, S-bar) / min(vol S, vol S-bar) <= threshold.
  conductance,
};

struct CutCriterion {
  CutMode mode = CutMode::conductance;
  double threshold = 0.0;
};

/// Components up to this size are searched exhaustively.
inline constexpr std::size_t kExhaustiveCutLimit = 20;

struct SparseCutResult {
  std::optional<CutQuery> cut;
  // True when the answer is exact (exhaustive search); false for the sweep heuristic.
  bool certified = false;
};

/// Looks for a cut of the connected graph `p` violating `criterion`. The
/// returned side is the smaller one. Exhaustive search returns the first
/// qualifying subset in increasing bitmask order (vertex n-1 never in the
/// mask); larger graphs use a Fiedler-vector sweep and return its best prefix.
SparseCutResult find_sparse_cut(const WeightedGraph& p, const CutCriterion& criterion);

struct PartitionResult {
  // Pieces with at least two vertices; vertex and edge maps point into the input.
  std::vector<Subgraph> components;
  // Input edge indices removed by cuts.
  std::vector<std::size_t> cross_edges;
  std::size_t certified_pieces = 0;
  std::size_t heuristic_pieces = 0;
};

/// Splits `g` along violating cuts until no piece has one (or the heuristic
/// stops finding them). Pieces are re-split into connected components after
/// every cut.
PartitionResult split_recursively(const WeightedGraph& g, const CutCriterion& criterion);

/// Pieces whose Cheeger constant exceeds h, plus the removed edges.
PartitionResult spectral_preprocessing(const WeightedGraph& g, double h);

/// |Q| / (h * m * log2(m + 1)) for a preprocessing run on m edges.
double q_bound_ratio(const PartitionResult& result, std::size_t m, double h);

/// One weight class L_i of the cut preprocessing: edges whose resampled
/// rescaled weight lies in (5 * 2^-i, 5 * 2^(1-i)].
struct CutWeightClass {
  int index = 0;
  double gamma = 0.0;
  WeightedGraph graph;                    // on the full vertex set, resampled weights
  std::vector<std::size_t> edge_origin;  // class edge -> input edge
  PartitionResult parts;                  // relative to `graph`
};

struct CutPreprocessing {
  double scale = 1.0;
  std::vector<CutWeightClass> classes;
  std::vector<std::size_t> discarded;    // rescaled weight above 5
  std::vector<std::size_t> unsampled;    // lost in importance sampling
  std::vector<double> resampled_weight;  // per input edge, 0 when not kept
};

/// Resampled rescaled weights: w/c is kept with probability min(w/(c eps^2), 1)
/// and reweighted by 1/p. Edges with w/c > 5 are discarded (weight 0).
std::vector<double> importance_sample(const WeightedGraph& g, double c, double epsilon,
                                      std::uint64_t seed);

/// Rescale by 1/c, discard heavy edges, importance-sample, bucket by weight
/// class and split every class along edge-expansion cuts below 1/epsilon.
/// epsilon must lie in [1/n, 1).
CutPreprocessing cut_preprocessing(const WeightedGraph& g, double c, double epsilon,
                                   std::uint64_t seed);

/// Orientation in which every arc (u, v) has out(u) < t or out(v) >= t - 1.
/// Starts from u -> v with u < v. With `check_potential` set, asserts that the
/// potential of violating arcs drops by at least 2 on every flip.
DirectedGraph assign_direction(const WeightedGraph& g, std::size_t t,
                               bool check_potential = false);

/// True when the orientation satisfies the assign_direction postcondition.
bool direction_postcondition(const DirectedGraph& d, std::size_t t);

enum class DegreeClassKind {
  verbatim,  // base case, fewer than three active vertices
  low,       // tail out-degree below beta
  indexed,   // tail out-degree in [2^band beta, 2^(band+1) beta)
};

struct DegreeClass {
  DegreeClassKind kind = DegreeClassKind::verbatim;
  int weight_class = 0;  // arcs weigh [2^j w0, 2^(j+1) w0)
  int band = 0;
  std::size_t level = 0;
  DirectedGraph arcs;  // on the full vertex set
};

struct DegreeClassOptions {
  double c_beta = 1.0;
  std::uint64_t seed = 0;
  double oversampling = 4.0;
  bool check_potential = false;
};

struct DegreeClassPartition {
  double beta = 0.0;
  std::vector<DegreeClass> classes;
  std::size_t recursion_depth = 0;
  double min_s = 0.0;  // smallest degree target s over the levels
  std::size_t input_vertices = 0;

  /// ceil(log_{2 - 1/min_s} n) + 1.
  std::size_t depth_bound() const;
};

/// Recursive degree-class partition: sparsify, orient with target 2s, split
/// by weight class and tail out-degree band, recurse on the leftover arcs.
DegreeClassPartition degree_class_partition(const WeightedGraph& g, double epsilon,
                                            const DegreeClassOptions& options = {});

}  // namespace quadsketch
