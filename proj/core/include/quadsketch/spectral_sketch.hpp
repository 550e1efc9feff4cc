#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quadsketch/graph.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/serialize.hpp"

namespace quadsketch {

enum class S3Threshold {
  two_pow_minus_kappa,  // h = 2^-kappa
  beta_eps_squared,     // h = beta * eps^2
};

struct SpectralParams {
  double c_alpha = 1.0;
  double c_beta = 1.0;
  std::optional<double> alpha;  // replaces c_alpha * eps^(-5/3)
  std::optional<double> beta;   // replaces c_beta * eps^(-8/5)
  S3Threshold s3_threshold = S3Threshold::two_pow_minus_kappa;
  double oversampling = 4.0;
  bool sparsify = true;

  double alpha_for(double epsilon) const;
  double beta_for(double epsilon) const;
};

/// Light vertices (weighted degree <= gamma * alpha) keep all incident edges;
/// heavy vertices keep their heavy-side degree and ceil(alpha) weighted
/// samples among heavy neighbors.
class S2Sketch {
 public:
  S2Sketch() = default;

  static S2Sketch build(const WeightedGraph& p, double epsilon, std::uint64_t seed,
                        const SpectralParams& params = {}, std::optional<double> gamma = {});

  /// Sampling processes of build(), one per heavy vertex with heavy
  /// neighbors, in vertex order; categories follow adjacency order.
  static std::vector<oracle::SamplingSlot> sampling_slots(const WeightedGraph& p, double epsilon,
                                                          const SpectralParams& params = {},
                                                          std::optional<double> gamma = {});
  /// The sketch build() would produce had the slots drawn `counts`.
  static S2Sketch from_counts(const WeightedGraph& p, double epsilon, const oracle::OutcomeCounts& counts,
                              const SpectralParams& params = {}, std::optional<double> gamma = {});

  double estimate(std::span<const double> x) const;

  std::size_t num_vertices() const noexcept { return degree_.size(); }
  std::size_t heavy_count() const;
  /// Vertices whose estimate term uses samples.
  std::size_t sampled_vertices() const;
  std::size_t draws() const noexcept { return draws_; }
  double gamma() const noexcept { return gamma_; }

  std::size_t words() const;
  void serialize(ByteWriter& out) const;
  static S2Sketch deserialize(ByteReader& in);

  friend bool operator==(const S2Sketch&, const S2Sketch&) = default;

 private:
  struct Sample {
    Vertex neighbor = 0;
    std::uint32_t count = 0;
    friend bool operator==(const Sample&, const Sample&) = default;
  };

  template <class Draw>
  static S2Sketch assemble(const WeightedGraph& p, double epsilon, const SpectralParams& params,
                           std::optional<double> gamma, Draw&& draw);

  double epsilon_ = 0.0;
  double alpha_ = 0.0;
  std::size_t draws_ = 0;
  double gamma_ = 0.0;
  std::vector<double> degree_;
  std::vector<std::uint8_t> heavy_;
  std::vector<Edge> light_edges_;  // every edge with a light endpoint
  std::vector<double> heavy_degree_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Sample> samples_;
};

/// Sketch of one indexed degree class (tail out-degrees in
/// [2^kappa beta, 2^(kappa+1) beta)). Pieces of high conductance keep their
/// degrees, the arcs whose tail has out-degree below 2^(kappa-1) beta, and
/// ceil(beta) weighted samples of the remaining arcs entering each vertex.
class S3Sketch {
 public:
  S3Sketch() = default;

  static S3Sketch build(const DirectedGraph& arcs, int kappa, double epsilon, std::uint64_t seed,
                        const SpectralParams& params = {});
  static std::vector<oracle::SamplingSlot> sampling_slots(const DirectedGraph& arcs, int kappa,
                                                          double epsilon, const SpectralParams& params = {});
  static S3Sketch from_counts(const DirectedGraph& arcs, int kappa, double epsilon,
                              const oracle::OutcomeCounts& counts, const SpectralParams& params = {});

  double estimate(std::span<const double> x) const;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_components() const noexcept { return components_.size(); }
  std::size_t num_cross_edges() const noexcept { return cross_.size(); }
  double threshold() const noexcept { return threshold_; }
  std::size_t sampled_vertices() const;

  std::size_t words() const;
  void serialize(ByteWriter& out) const;
  static S3Sketch deserialize(ByteReader& in);

  friend bool operator==(const S3Sketch&, const S3Sketch&) = default;

 private:
  struct Sample {
    Vertex tail = 0;
    std::uint32_t count = 0;
    friend bool operator==(const Sample&, const Sample&) = default;
  };
  struct Component {
    std::vector<Vertex> vertices;
    std::vector<double> degree;
    std::vector<double> heavy_in_degree;
    std::vector<Arc> light_arcs;  // local ids
    std::vector<std::size_t> offsets{0};
    std::vector<Sample> samples;  // grouped by head vertex
    friend bool operator==(const Component&, const Component&) = default;
  };

  template <class Draw>
  static S3Sketch assemble(const DirectedGraph& arcs, int kappa, double epsilon,
                           const SpectralParams& params, Draw&& draw);

  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  double beta_ = 0.0;
  std::size_t draws_ = 0;
  int kappa_ = 0;
  double threshold_ = 0.0;
  std::vector<Edge> cross_;
  std::vector<Component> components_;
};

/// Sparsify, split into factor-2 weight classes, remove low-conductance cuts
/// (kept exactly) and S2-sketch every remaining piece.
class SpectralBasicSketch {
 public:
  SpectralBasicSketch() = default;
  static SpectralBasicSketch build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                   const SpectralParams& params = {});

  double estimate(std::span<const double> x) const;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_pieces() const noexcept { return pieces_.size(); }
  std::size_t num_exact_edges() const noexcept { return exact_.size(); }
  std::size_t sampled_vertices() const;

  std::size_t words() const;
  std::vector<std::uint8_t> to_bytes() const;
  static SpectralBasicSketch from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const SpectralBasicSketch&, const SpectralBasicSketch&) = default;

 private:
  struct Piece {
    std::vector<Vertex> vertices;
    S2Sketch sketch;
    friend bool operator==(const Piece&, const Piece&) = default;
  };
  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  std::vector<Edge> exact_;
  std::vector<Piece> pieces_;
};

/// Degree-class partition; classes with all tail out-degrees below beta are
/// stored exactly, indexed classes get an S3 sketch.
class SpectralImprovedSketch {
 public:
  SpectralImprovedSketch() = default;
  static SpectralImprovedSketch build(const WeightedGraph& g, double epsilon, std::uint64_t seed,
                                      const SpectralParams& params = {});

  double estimate(std::span<const double> x) const;

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_exact_edges() const noexcept { return exact_.size(); }
  std::size_t num_sampled_classes() const noexcept { return classes_.size(); }
  std::size_t sampled_vertices() const;

  std::size_t words() const;
  std::vector<std::uint8_t> to_bytes() const;
  static SpectralImprovedSketch from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const SpectralImprovedSketch&, const SpectralImprovedSketch&) = default;

 private:
  std::size_t n_ = 0;
  double epsilon_ = 0.0;
  std::vector<Edge> exact_;
  std::vector<S3Sketch> classes_;
};

}  // namespace quadsketch
