#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "quadsketch/graph.hpp"
#include "quadsketch/serialize.hpp"

namespace quadsketch {

inline constexpr std::size_t kNoTreeEdge = std::numeric_limits<std::size_t>::max();

struct QueryResult {
  double value = 0.0;
  double scale = 0.0;                    // ladder value used, 0 when none
  std::size_t tree_index = kNoTreeEdge;  // stored tree edge consulted (general sketch)
  double tree_weight = 0.0;
  std::vector<double> contributions;     // per piece / per weight class
  std::size_t bytes_touched = 0;
};

/// Degrees plus ceil(1/eps) uniform incident-edge samples per vertex.
class S1Sketch {
 public:
  struct Sample {
    Vertex neighbor = 0;
    double w = 0.0;
    std::uint32_t count = 0;
    friend bool operator==(const Sample&, const Sample&) = default;
  };

  S1Sketch() = default;
  /// Assembles a sketch from explicit draw counts: counts[u][k] is how often
  /// the k-th incidence of u was drawn. Every non-isolated vertex must have
  /// counts summing to ceil(1/epsilon).
  S1Sketch(const WeightedGraph& p, double epsilon,
           const std::vector<std::vector<std::size_t>>& counts);

  static S1Sketch build(const WeightedGraph& p, double epsilon, std::uint64_t seed);

  double estimate(const CutQuery& s) const;

  std::size_t num_vertices() const noexcept { return weighted_degree_.size(); }
  std::size_t samples_per_vertex() const noexcept { return samples_per_vertex_; }
  double epsilon() const noexcept { return epsilon_; }
  double weighted_degree(Vertex u) const { return weighted_degree_.at(u); }
  std::size_t degree(Vertex u) const { return degree_.at(u); }
  std::span<const Sample> samples(Vertex u) const;

  std::size_t words() const;
  void serialize(ByteWriter& out) const;
  static S1Sketch deserialize(ByteReader& in);

  friend bool operator==(const S1Sketch&, const S1Sketch&) = default;

 private:
  double epsilon_ = 0.0;
  std::size_t samples_per_vertex_ = 0;
  std::vector<double> weighted_degree_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Sample> samples_;
};

struct CutSketchOptions {
  double sparsifier_epsilon = 0.2;
  double oversampling = 4.0;
};

/// Sketch for graphs whose weights span a polynomial range: a coarse cut
/// sparsifier picks a scale c from the ladder w_min * 1.4^i, and the
/// structure stored for c (exact cross edges plus S1 sketches of
/// well-expanding pieces) answers the query.
class CutSketchPoly {
 public:
  static constexpr double kLadderBase = 1.4;

  CutSketchPoly() = default;
  static CutSketchPoly build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                             const CutSketchOptions& options = {});

  QueryResult query(const CutQuery& s) const;
  double estimate(const CutQuery& s) const { return query(s).value; }

  std::size_t num_vertices() const noexcept { return n_; }
  bool verbatim() const noexcept { return verbatim_; }
  const WeightedGraph& sparsifier() const noexcept { return sparsifier_; }
  std::vector<double> ladder() const;

  std::size_t words() const;
  void serialize(ByteWriter& out) const;
  static CutSketchPoly deserialize(ByteReader& in);
  std::vector<std::uint8_t> to_bytes() const;
  static CutSketchPoly from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const CutSketchPoly&, const CutSketchPoly&) = default;

 private:
  struct Component {
    std::vector<Vertex> vertices;
    S1Sketch sketch;
    friend bool operator==(const Component&, const Component&) = default;
  };
  struct WeightClass {
    int index = 0;
    std::vector<Edge> cross;  // resampled rescaled weights
    std::vector<Component> components;
    friend bool operator==(const WeightClass&, const WeightClass&) = default;
  };
  struct Scale {
    double c = 0.0;
    std::vector<WeightClass> classes;
    friend bool operator==(const Scale&, const Scale&) = default;
  };

  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  bool verbatim_ = false;
  WeightedGraph sparsifier_;  // the exact graph when verbatim
  std::vector<Scale> scales_;
};

/// Edge indices of a maximum-weight spanning forest in Kruskal insertion
/// order (decreasing weight, ties by input index).
std::vector<std::size_t> mst_max(const WeightedGraph& g);

/// Arbitrary-weight cut sketch: the maximum spanning forest plus poly-weight
/// sketches of the contracted graphs G'_j for tree edges selected by the
/// halving rule.
class CutSketchGeneral {
 public:
  CutSketchGeneral() = default;
  static CutSketchGeneral build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                const CutSketchOptions& options = {});

  /// Throws std::logic_error when a contraction class straddles the query.
  QueryResult query(const CutQuery& s) const;
  double estimate(const CutQuery& s) const { return query(s).value; }

  std::size_t num_vertices() const noexcept { return n_; }
  bool verbatim() const noexcept { return verbatim_; }
  std::span<const Edge> tree() const noexcept { return tree_; }
  std::vector<std::size_t> stored_indices() const;

  std::size_t words() const;
  void serialize(ByteWriter& out) const;
  static CutSketchGeneral deserialize(ByteReader& in);
  std::vector<std::uint8_t> to_bytes() const;
  static CutSketchGeneral from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const CutSketchGeneral&, const CutSketchGeneral&) = default;

 private:
  struct Piece {
    Vertex representative = 0;  // smallest vertex of the component of G_j
    CutSketchPoly sketch;       // super-vertices ordered by class representative
    friend bool operator==(const Piece&, const Piece&) = default;
  };
  struct Level {
    std::size_t tree_index = 0;
    std::vector<Piece> pieces;
    friend bool operator==(const Level&, const Level&) = default;
  };

  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  bool verbatim_ = false;
  WeightedGraph exact_;
  std::vector<Edge> tree_;
  std::vector<Level> levels_;
};

/// Median of independently seeded general sketches.
class AmplifiedCutSketch {
 public:
  AmplifiedCutSketch() = default;
  static AmplifiedCutSketch build(const WeightedGraph& g, double epsilon, std::size_t reps,
                                  std::uint64_t seed, const CutSketchOptions& options = {});

  QueryResult query(const CutQuery& s) const;
  double estimate(const CutQuery& s) const { return query(s).value; }
  std::size_t reps() const noexcept { return copies_.size(); }
  const CutSketchGeneral& copy(std::size_t i) const { return copies_.at(i); }

  std::size_t words() const;
  std::vector<std::uint8_t> to_bytes() const;
  static AmplifiedCutSketch from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const AmplifiedCutSketch&, const AmplifiedCutSketch&) = default;

 private:
  std::vector<CutSketchGeneral> copies_;
};

/// Builds and queries one sketch for a (graph, query, epsilon, seed).
using CutEstimator =
    std::function<double(const WeightedGraph&, const CutQuery&, double, std::uint64_t)>;

/// Median over `reps` (odd) independent seeds of `estimator`.
double amplified_estimate(const CutEstimator& estimator, const WeightedGraph& g,
                          const CutQuery& s, double epsilon, std::size_t reps,
                          std::uint64_t seed);

}  // namespace quadsketch
