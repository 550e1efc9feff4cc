#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <utility>

#include "corpus.hpp"
#include "quadsketch/graph.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/partition.hpp"

using namespace quadsketch;

namespace {

WeightedGraph two_triangles() {
  return WeightedGraph(6, std::vector<Edge>{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

WeightedGraph barbell() {
  std::vector<Edge> edges;
  for (Vertex base : {0u, 5u}) {
    for (Vertex u = 0; u < 5; ++u) {
      for (Vertex v = u + 1; v < 5; ++v) edges.push_back({base + u, base + v, 1.0});
    }
  }
  edges.push_back({4, 5, 1.0});
  return WeightedGraph(10, edges);
}

// Every edge of g appears exactly once among the pieces and the cross edges.
void expect_conserved(const WeightedGraph& g, const PartitionResult& r) {
  std::vector<int> seen(g.num_edges(), 0);
  for (const Subgraph& c : r.components) {
    for (std::size_t i = 0; i < c.graph.num_edges(); ++i) {
      const std::size_t origin = c.edge_origin[i];
      ++seen[origin];
      EXPECT_EQ(c.graph.edge(i).w, g.edge(origin).w);
    }
  }
  for (std::size_t e : r.cross_edges) ++seen[e];
  for (int s : seen) EXPECT_EQ(s, 1);
}

}  // namespace

TEST(FindSparseCut, TwoTrianglesSplitAtTheBridge) {
  const auto r = find_sparse_cut(two_triangles(), {CutMode::conductance, 0.2});
  ASSERT_TRUE(r.cut.has_value());
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.cut->members(), (std::vector<Vertex>{0, 1, 2}));
}

TEST(FindSparseCut, CompleteGraphHasNoSparseEdgeCut) {
  const auto r = find_sparse_cut(qs_test::complete(6), {CutMode::edge_expansion, 1.0});
  EXPECT_FALSE(r.cut.has_value());
  EXPECT_TRUE(r.certified);
}

TEST(FindSparseCut, SingleEdgeAtThresholdOne) {
  const WeightedGraph edge(2, std::vector<Edge>{{0, 1, 2.5}});
  const auto r = find_sparse_cut(edge, {CutMode::conductance, 1.0});
  ASSERT_TRUE(r.cut.has_value());
  EXPECT_EQ(r.cut->count(), 1u);
}

TEST(FindSparseCut, ExhaustiveMatchesCheegerConstant) {
  for (int trial = 0; trial < 30; ++trial) {
    const WeightedGraph g = qs_test::gnp_connected(8 + trial % 5, 0.5, derive_seed(21, trial), 1.0, 3.0);
    const double h = cheeger_exact(g);
    EXPECT_TRUE(find_sparse_cut(g, {CutMode::conductance, h}).cut.has_value());
    EXPECT_FALSE(find_sparse_cut(g, {CutMode::conductance, h * (1.0 - 1e-9)}).cut.has_value());
  }
}

TEST(SpectralPreprocessing, ThresholdBelowCheegerKeepsGraph) {
  const WeightedGraph g = qs_test::complete(6);
  const PartitionResult r = spectral_preprocessing(g, 0.5 * cheeger_exact(g));
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_TRUE(r.cross_edges.empty());
}

TEST(SpectralPreprocessing, BarbellLosesOnlyTheBridge) {
  const WeightedGraph g = barbell();
  const PartitionResult r = spectral_preprocessing(g, 0.1);
  ASSERT_EQ(r.components.size(), 2u);
  for (const Subgraph& c : r.components) EXPECT_EQ(c.graph.num_vertices(), 5u);
  ASSERT_EQ(r.cross_edges.size(), 1u);
  EXPECT_EQ(g.edge(r.cross_edges[0]), (Edge{4, 5, 1.0}));
}

TEST(SpectralPreprocessing, ThresholdOneShattersGraph) {
  const WeightedGraph g = qs_test::gnp(9, 0.6, 22, 1.0, 2.0);
  const PartitionResult r = spectral_preprocessing(g, 1.0);
  EXPECT_TRUE(r.components.empty());
  EXPECT_EQ(r.cross_edges.size(), g.num_edges());
}

TEST(SpectralPreprocessing, ConservesEdgesAndCertifiesCheeger) {
  for (int trial = 0; trial < 40; ++trial) {
    const double gamma = 1.0 + trial;
    const WeightedGraph g = qs_test::gnp(10 + trial % 8, 0.45, derive_seed(23, trial), gamma, 2.0 * gamma);
    const double h = 0.15 + 0.01 * (trial % 10);
    const PartitionResult r = spectral_preprocessing(g, h);
    expect_conserved(g, r);
    EXPECT_LE(q_bound_ratio(r, g.num_edges(), h), 16.0);
    for (const Subgraph& c : r.components) {
      EXPECT_TRUE(is_connected(c.graph));
      EXPECT_GT(cheeger_exact(c.graph), h);
      EXPECT_GE(oracle::lambda1_normalized(c.graph), h * h / 2.0);
    }
  }
}

TEST(CutPreprocessing, HeavyEdgesAreDiscarded) {
  const WeightedGraph g = qs_test::complete(6, 6.0);
  const CutPreprocessing r = cut_preprocessing(g, 1.0, 0.25, 1);
  EXPECT_TRUE(r.classes.empty());
  EXPECT_EQ(r.discarded.size(), g.num_edges());
}

TEST(CutPreprocessing, CertainEdgesKeepTheirWeight) {
  const WeightedGraph g = qs_test::gnp(12, 0.5, 24, 0.1, 4.0);
  const double eps = 0.25;
  const auto w = importance_sample(g, 1.0, eps, 3);
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const double rescaled = g.edge(i).w;
    if (rescaled >= eps * eps && rescaled <= 5.0) EXPECT_EQ(w[i], rescaled);
  }
}

TEST(CutPreprocessing, PiecesExpandAndEdgesAreConserved) {
  const double eps = 0.25;
  std::size_t pieces = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const WeightedGraph g = qs_test::gnp(16, seed % 2 ? 0.9 : 0.5, derive_seed(25, seed));
    const CutPreprocessing r = cut_preprocessing(g, 1.0, eps, seed);
    std::vector<int> seen(g.num_edges(), 0);
    for (std::size_t e : r.discarded) ++seen[e];
    for (std::size_t e : r.unsampled) ++seen[e];
    for (const CutWeightClass& cls : r.classes) {
      for (std::size_t e : cls.edge_origin) ++seen[e];
      expect_conserved(cls.graph, cls.parts);
      for (const Subgraph& c : cls.parts.components) EXPECT_GE(expansion_exact(c.graph), 1.0 / eps);
      pieces += cls.parts.components.size();
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
  EXPECT_GT(pieces, 0u);
}

TEST(CutPreprocessing, RejectsEpsilonBelowOneOverN) {
  EXPECT_THROW(cut_preprocessing(qs_test::complete(4), 1.0, 0.1, 0), std::domain_error);
}

TEST(AssignDirection, SingleEdge) {
  const WeightedGraph edge(2, std::vector<Edge>{{0, 1, 1.0}});
  EXPECT_TRUE(direction_postcondition(assign_direction(edge, 2), 2));
}

TEST(AssignDirection, StarCenterEndsBelowTarget) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= 5; ++v) edges.push_back({0, v, 1.0});
  const DirectedGraph d = assign_direction(WeightedGraph(6, edges), 3, true);
  EXPECT_TRUE(direction_postcondition(d, 3));
  EXPECT_LT(d.out_degrees()[0], 3u);
  EXPECT_EQ(d.num_arcs(), 5u);
}

TEST(AssignDirection, PostconditionOnRandomGraphs) {
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 31;
    const WeightedGraph g = qs_test::gnp(n, 0.1 + 0.008 * trial, derive_seed(26, trial));
    for (std::size_t t : {2u, 4u, 8u}) {
      const DirectedGraph d = assign_direction(g, t, true);
      EXPECT_TRUE(direction_postcondition(d, t));
      EXPECT_EQ(d.undirected(), g);
    }
  }
}

TEST(DegreeClassPartition, TwoVerticesAreVerbatim) {
  const WeightedGraph g(2, std::vector<Edge>{{0, 1, 3.0}});
  const DegreeClassPartition p = degree_class_partition(g, 0.25);
  ASSERT_EQ(p.classes.size(), 1u);
  EXPECT_EQ(p.classes[0].kind, DegreeClassKind::verbatim);
  EXPECT_EQ(p.classes[0].arcs.num_arcs(), 1u);
}

TEST(DegreeClassPartition, SparseGraphIsAllLow) {
  const WeightedGraph g = qs_test::cycle(30);
  const DegreeClassPartition p = degree_class_partition(g, 0.25);
  EXPECT_EQ(p.recursion_depth, 1u);
  std::size_t arcs = 0;
  for (const DegreeClass& c : p.classes) {
    EXPECT_EQ(c.kind, DegreeClassKind::low);
    arcs += c.arcs.num_arcs();
  }
  EXPECT_EQ(arcs, g.num_edges());
}

TEST(DegreeClassPartition, BandsAndDepthOnDenseGraph) {
  const WeightedGraph g = qs_test::gnp(64, 0.3, 27, 1.0, 8.0);
  DegreeClassOptions opts;
  opts.check_potential = true;
  opts.c_beta = 0.05;
  const DegreeClassPartition p = degree_class_partition(g, 0.25, opts);
  EXPECT_LE(p.recursion_depth, p.depth_bound());
  std::set<std::pair<Vertex, Vertex>> pairs;
  std::size_t indexed = 0;
  for (const DegreeClass& c : p.classes) {
    const auto out = c.arcs.out_degrees();
    for (const Arc& a : c.arcs.arcs()) {
      EXPECT_TRUE(pairs.insert({std::min(a.tail, a.head), std::max(a.tail, a.head)}).second);
      if (c.kind == DegreeClassKind::verbatim) continue;
      EXPECT_GE(a.w, std::ldexp(1.0, c.weight_class));
      EXPECT_LT(a.w, std::ldexp(1.0, c.weight_class + 1));
      const auto d = static_cast<double>(out[a.tail]);
      if (c.kind == DegreeClassKind::low) {
        EXPECT_LT(d, p.beta);
      } else {
        EXPECT_GE(d, std::ldexp(p.beta, c.band));
        EXPECT_LT(d, std::ldexp(p.beta, c.band + 1));
      }
    }
    indexed += c.kind == DegreeClassKind::indexed ? 1 : 0;
  }
  EXPECT_GT(indexed, 0u);
}
