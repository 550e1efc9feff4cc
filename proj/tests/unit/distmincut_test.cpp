#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "corpus.hpp"
#include "quadsketch/distmincut.hpp"
#include "quadsketch/oracle.hpp"
#include "quadsketch/sparsify.hpp"

using namespace quadsketch;

namespace {

// Side of the cut that excludes vertex 0.
CutQuery canonical(const CutQuery& s) { return s.contains(0) ? s.complement() : s; }

WeightedGraph share(const WeightedGraph& g, const std::vector<std::size_t>& ids) {
  std::vector<Edge> edges;
  for (std::size_t i : ids) edges.push_back(g.edge(i));
  return WeightedGraph(g.num_vertices(), edges);
}

}  // namespace

TEST(PartitionEdges, Examples) {
  const WeightedGraph g = qs_test::cycle(6);
  const auto one = partition_edges(g, 1, EdgeSplit::random, 3);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 6u);
  const auto rr = partition_edges(g, 3, EdgeSplit::round_robin);
  for (const auto& part : rr) EXPECT_EQ(part.size(), 2u);
  EXPECT_EQ(partition_edges(g, 3, EdgeSplit::random, 9), partition_edges(g, 3, EdgeSplit::random, 9));
}

TEST(PartitionEdges, EveryEdgeExactlyOnce) {
  const WeightedGraph g = qs_test::gnp(30, 0.3, 81);
  for (EdgeSplit split : {EdgeSplit::round_robin, EdgeSplit::random, EdgeSplit::by_vertex_hash}) {
    std::vector<int> seen(g.num_edges(), 0);
    for (const auto& part : partition_edges(g, 4, split, 2)) {
      for (std::size_t e : part) ++seen[e];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(PartitionEdges, SharesAddUpToEveryCut) {
  const WeightedGraph g = qs_test::gnp(12, 0.5, 82, 0.5, 3.0);
  const auto parts = partition_edges(g, 3, EdgeSplit::random, 82);
  std::vector<WeightedGraph> shares;
  for (const auto& p : parts) shares.push_back(share(g, p));
  for (std::uint64_t mask = 1; mask < (1u << 11); ++mask) {
    const CutQuery s = CutQuery::from_mask(12, mask);
    double sum = 0.0;
    for (const WeightedGraph& h : shares) sum += cut_weight(h, s);
    EXPECT_NEAR(sum, cut_weight(g, s), 1e-9 * cut_weight(g, s));
  }
}

TEST(NearMinCuts, ExhaustiveMatchesOracle) {
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGraph h = qs_test::gnp_connected(10 + trial % 8, 0.4, derive_seed(83, trial), 1.0, 3.0);
    auto want = oracle::near_min_cuts_exhaustive(h, 1.5);
    for (CutQuery& s : want) s = canonical(s);
    const auto got = near_min_cut_candidates(h, 1.5, trial);
    for (const CutQuery& s : want) EXPECT_NE(std::find(got.begin(), got.end(), s), got.end());
    EXPECT_EQ(got.size(), want.size());
  }
}

TEST(NearMinCuts, ContractionFindsMinimumOnLargerGraphs) {
  for (int trial = 0; trial < 5; ++trial) {
    const WeightedGraph h = qs_test::gnp_connected(32, 0.3, derive_seed(84, trial), 1.0, 3.0);
    const double lambda = oracle::min_cut_exact(h).value;
    const auto got = near_min_cut_candidates(h, 1.5, trial);
    double best = INFINITY;
    for (const CutQuery& s : got) {
      EXPECT_FALSE(s.contains(0));
      EXPECT_LE(cut_weight(h, s), 1.5 * lambda * (1.0 + 1e-12));
      best = std::min(best, cut_weight(h, s));
    }
    EXPECT_DOUBLE_EQ(best, lambda);
  }
}

TEST(Protocol, CycleMinimumCut) {
  const WeightedGraph g = qs_test::cycle(6);
  ProtocolOptions opts;
  opts.servers = 2;
  opts.epsilon = 0.1;
  opts.seed = 1;
  const ProtocolTranscript tr = run_protocol(g, opts);
  EXPECT_NEAR(tr.estimate, 2.0, 0.6);
  EXPECT_DOUBLE_EQ(cut_weight(g, tr.cut), 2.0);
}

TEST(Protocol, SingleServerNearExactOnRandomGraphs) {
  std::size_t ok = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const WeightedGraph g = qs_test::gnp_connected(16 + s % 24, 0.4, derive_seed(85, s), 1.0, 2.0);
    ProtocolOptions opts;
    opts.servers = 1;
    opts.epsilon = 0.1;
    opts.reps = 3;
    opts.seed = s;
    const ProtocolTranscript tr = run_protocol(g, opts);
    ok += cut_weight(g, tr.cut) <= (1.0 + 3.0 * opts.epsilon) * oracle::min_cut_exact(g).value ? 1 : 0;
  }
  EXPECT_GE(ok, 19u);
}

TEST(Protocol, ByteAccountingAndDeterminism) {
  const WeightedGraph g = qs_test::gnp_connected(20, 0.5, 86);
  ProtocolOptions opts;
  opts.servers = 3;
  opts.reps = 3;
  opts.seed = 4;
  const ProtocolTranscript a = run_protocol(g, opts);
  std::size_t total = 0, edges = 0;
  for (const ServerMessage& m : a.messages) {
    total += m.bytes();
    edges += m.edges;
  }
  EXPECT_EQ(a.total_bytes, total);
  EXPECT_EQ(edges, g.num_edges());
  const ProtocolTranscript b = run_protocol(g, opts);
  EXPECT_EQ(a.total_bytes, b.total_bytes);
  EXPECT_EQ(a.cut, b.cut);
  EXPECT_EQ(a.estimate, b.estimate);
}

TEST(Protocol, RejectsDisconnectedInput) {
  const WeightedGraph g(4, std::vector<Edge>{{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_THROW(run_protocol(g, {}), std::invalid_argument);
}
